//! Globally adaptive Gauss-Kronrod (7/15) quadrature over finite and
//! semi-infinite pieces, for real and complex integrands.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Values that can be integrated: `f64` and `Complex64`.
pub trait QuadValue:
    Copy + Default + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self>
{
    fn norm(self) -> f64;
    fn finite(self) -> bool;
}

impl QuadValue for f64 {
    fn norm(self) -> f64 {
        self.abs()
    }
    fn finite(self) -> bool {
        self.is_finite()
    }
}

impl QuadValue for Complex64 {
    fn norm(self) -> f64 {
        Complex64::norm(self)
    }
    fn finite(self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
}

/// How semi-infinite tails are closed off.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TailStrategy {
    /// Rational map of the tail onto a finite interval; the integrand's own
    /// decay (power-law in t, i.e. exponential or polynomial in log t) is integrated.
    PowerTail,
    /// Convexity bound of the exponential integrand, used by the Laplace oracle.
    ExpBound,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadConfig {
    pub rel_tol: f64,
    pub abs_tol_log: f64,
    pub max_depth: u32,
    pub tail_strategy: TailStrategy,
}

impl Default for QuadConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            abs_tol_log: 1e-12,
            max_depth: 40,
            tail_strategy: TailStrategy::PowerTail,
        }
    }
}

impl QuadConfig {
    pub fn with_rel_tol(mut self, rel_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0) || !(self.abs_tol_log > 0.0) {
            return Err(Error::Domain(
                "quadrature tolerances must be positive".into(),
            ));
        }
        if self.max_depth < 10 {
            return Err(Error::Domain("max_depth must be at least 10".into()));
        }
        Ok(())
    }
}

/// One integration region in the physical variable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Piece {
    Finite(f64, f64),
    /// `[from, ∞)`, mapped by `v = from + scale·u/(1-u)`.
    Upper {
        from: f64,
        scale: f64,
    },
    /// `(-∞, to]`, mapped by `v = to - scale·u/(1-u)`.
    Lower {
        to: f64,
        scale: f64,
    },
}

impl Piece {
    fn range(&self) -> (f64, f64) {
        match *self {
            Piece::Finite(a, b) => (a, b),
            _ => (0.0, 1.0),
        }
    }

    #[inline]
    fn map(&self, u: f64) -> Option<(f64, f64)> {
        match *self {
            Piece::Finite(_, _) => Some((u, 1.0)),
            Piece::Upper { from, scale } => {
                let w = 1.0 - u;
                if w <= 0.0 {
                    return None;
                }
                Some((from + scale * u / w, scale / (w * w)))
            }
            Piece::Lower { to, scale } => {
                let w = 1.0 - u;
                if w <= 0.0 {
                    return None;
                }
                Some((to - scale * u / w, scale / (w * w)))
            }
        }
    }
}

/// Split the real line at the sorted points and close both ends with tails.
pub fn line_pieces(breaks: &[f64], scale: f64) -> Vec<Piece> {
    let mut b: Vec<f64> = breaks.iter().copied().filter(|x| x.is_finite()).collect();
    b.sort_by(|x, y| x.partial_cmp(y).unwrap());
    b.dedup_by(|x, y| (*x - *y).abs() < 1e-12);
    assert!(!b.is_empty());
    let mut out = Vec::with_capacity(b.len() + 1);
    out.push(Piece::Lower { to: b[0], scale });
    for w in b.windows(2) {
        out.push(Piece::Finite(w[0], w[1]));
    }
    out.push(Piece::Upper {
        from: *b.last().unwrap(),
        scale,
    });
    out
}

/// Splits pieces at the given points (sorted or not) so no panel straddles one.
pub fn split_pieces(pieces: &[Piece], at: &[f64]) -> Vec<Piece> {
    let mut k: Vec<f64> = at.iter().copied().filter(|x| x.is_finite()).collect();
    k.sort_by(|x, y| x.partial_cmp(y).unwrap());
    let mut out = Vec::with_capacity(pieces.len() + k.len());
    for &p in pieces {
        match p {
            Piece::Finite(a, b) => {
                let mut last = a;
                for &x in k.iter().filter(|&&x| x > a && x < b) {
                    out.push(Piece::Finite(last, x));
                    last = x;
                }
                out.push(Piece::Finite(last, b));
            }
            Piece::Upper { from, scale } => {
                let mut last = from;
                for &x in k.iter().filter(|&&x| x > from) {
                    out.push(Piece::Finite(last, x));
                    last = x;
                }
                out.push(Piece::Upper { from: last, scale });
            }
            Piece::Lower { to, scale } => {
                let inner: Vec<f64> = k.iter().copied().filter(|&x| x < to).collect();
                match inner.first() {
                    Some(&first) => {
                        out.push(Piece::Lower { to: first, scale });
                        for w in inner.windows(2) {
                            out.push(Piece::Finite(w[0], w[1]));
                        }
                        out.push(Piece::Finite(*inner.last().unwrap(), to));
                    }
                    None => out.push(p),
                }
            }
        }
    }
    out
}

#[derive(Debug, Clone, Copy)]
pub struct Estimate<T> {
    pub value: T,
    pub error: f64,
    pub evals: usize,
}

struct Panel<T> {
    piece: usize,
    a: f64,
    b: f64,
    depth: u32,
    value: T,
    error: f64,
    resabs: f64,
}

impl<T> PartialEq for Panel<T> {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl<T> Eq for Panel<T> {}
impl<T> PartialOrd for Panel<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<T> Ord for Panel<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .partial_cmp(&other.error)
            .unwrap_or(Ordering::Equal)
    }
}

fn kronrod<T: QuadValue, F: Fn(f64) -> T>(
    f: &F,
    piece: &Piece,
    a: f64,
    b: f64,
) -> Result<(T, f64, f64)> {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let eval = |u: f64| -> Result<T> {
        match piece.map(u) {
            None => Ok(T::default()),
            Some((v, jac)) => {
                let y = f(v);
                if y.norm() == 0.0 {
                    return Ok(T::default());
                }
                let r = y * jac;
                if !r.finite() {
                    return Err(Error::Evaluation(format!("non-finite integrand at {v:e}")));
                }
                Ok(r)
            }
        }
    };
    let fc = eval(c)?;
    let mut resk = fc * WGK[7];
    let mut resg = fc * WG[3];
    let mut resabs = fc.norm() * WGK[7];
    let mut vals = [(T::default(), T::default()); 7];
    for (j, slot) in vals.iter_mut().enumerate() {
        let dx = h * XGK[j];
        let f1 = eval(c - dx)?;
        let f2 = eval(c + dx)?;
        resk = resk + (f1 + f2) * WGK[j];
        resabs += WGK[j] * (f1.norm() + f2.norm());
        if j % 2 == 1 {
            resg = resg + (f1 + f2) * WG[j / 2];
        }
        *slot = (f1, f2);
    }
    let mean = resk * 0.5;
    let mut resasc = WGK[7] * (fc - mean).norm();
    for (j, (f1, f2)) in vals.iter().enumerate() {
        resasc += WGK[j] * ((*f1 - mean).norm() + (*f2 - mean).norm());
    }
    let habs = h.abs();
    resasc *= habs;
    resabs *= habs;
    let mut err = ((resk - resg) * h).norm();
    if resasc != 0.0 && err != 0.0 {
        err = resasc * (200.0 * err / resasc).powf(1.5).min(1.0);
    }
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * resabs);
    }
    Ok((resk * h, err, resabs))
}

/// Integrate `f` over the union of `pieces` to `max(rel_tol·|I|, abs_tol)`.
pub fn integrate<T, F>(
    f: F,
    pieces: &[Piece],
    rel_tol: f64,
    abs_tol: f64,
    max_depth: u32,
) -> Result<Estimate<T>>
where
    T: QuadValue,
    F: Fn(f64) -> T,
{
    let mut heap = BinaryHeap::new();
    let mut done: Vec<Panel<T>> = Vec::new();
    let mut evals = 0usize;
    for (i, p) in pieces.iter().enumerate() {
        let (a, b) = p.range();
        if a == b {
            continue;
        }
        let (value, error, resabs) = kronrod(&f, p, a, b)?;
        evals += 15;
        heap.push(Panel {
            piece: i,
            a,
            b,
            depth: 0,
            value,
            error,
            resabs,
        });
    }
    let max_panels = 4000 + 400 * pieces.len();
    loop {
        let (total, err, resabs) = heap
            .iter()
            .chain(done.iter())
            .fold((T::default(), 0.0, 0.0), |(v, e, r), p| {
                (v + p.value, e + p.error, r + p.resabs)
            });
        let target = (rel_tol * total.norm()).max(abs_tol);
        if err <= target || err <= 50.0 * f64::EPSILON * resabs {
            return Ok(Estimate {
                value: total,
                error: err,
                evals,
            });
        }
        let worst = match heap.pop() {
            Some(p) => p,
            None => {
                return Err(Error::Precision {
                    achieved: err,
                    wanted: target,
                });
            }
        };
        let mid = 0.5 * (worst.a + worst.b);
        let unsplittable = worst.depth >= max_depth
            || mid <= worst.a.min(worst.b)
            || mid >= worst.a.max(worst.b)
            || heap.len() + done.len() > max_panels;
        if unsplittable {
            done.push(worst);
            continue;
        }
        let piece = &pieces[worst.piece];
        for (a, b) in [(worst.a, mid), (mid, worst.b)] {
            let (value, error, resabs) = kronrod(&f, piece, a, b)?;
            evals += 15;
            heap.push(Panel {
                piece: worst.piece,
                a,
                b,
                depth: worst.depth + 1,
                value,
                error,
                resabs,
            });
        }
    }
}

/// Finite-interval convenience wrapper.
pub fn integrate_finite<T, F>(
    f: F,
    a: f64,
    b: f64,
    rel_tol: f64,
    abs_tol: f64,
) -> Result<Estimate<T>>
where
    T: QuadValue,
    F: Fn(f64) -> T,
{
    integrate(f, &[Piece::Finite(a, b)], rel_tol, abs_tol, 40)
}

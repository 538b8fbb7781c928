use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Shape of a registered spectral function, before scaling.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FunctionKind {
    /// `x^p` for integer `p`.
    Power { p: u32 },
    /// `|x|^p` for real `p >= 1`.
    AbsPower { p: f64 },
    Constant { c: f64 },
    /// Piecewise-linear interpolation through `(xs[i], ys[i])`; `xs` strictly increasing.
    Table { xs: Vec<f64>, ys: Vec<f64> },
}

/// A real function on `[lo, hi]` together with its Lipschitz constant `K`
/// and `f_max = sup |f|` over the interval.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectralFunction {
    pub name: String,
    pub kind: FunctionKind,
    /// Overall multiplier applied after the base shape.
    pub scale: f64,
    pub lo: f64,
    pub hi: f64,
    pub lipschitz: f64,
    pub f_max: f64,
}

impl SpectralFunction {
    /// `x^p` on `[-b, b]`: `K = p b^{p-1}`, `f_max = b^p`.
    pub fn pow(p: u32, b: f64) -> Self {
        let pf = f64::from(p);
        Self {
            name: "pow_p".into(),
            kind: FunctionKind::Power { p },
            scale: 1.0,
            lo: -b,
            hi: b,
            lipschitz: if p == 0 { 0.0 } else { pf * b.powf(pf - 1.0) },
            f_max: b.powf(pf),
        }
    }

    /// `|x|^p` on `[-b, b]`: `K = p b^{p-1}`, `f_max = b^p`.
    pub fn abs_pow(p: f64, b: f64) -> Result<Self> {
        if !(p >= 1.0) {
            return Err(Error::InvalidInput(format!("|x|^p needs p >= 1, got {p}")));
        }
        Ok(Self {
            name: "abs_pow_p".into(),
            kind: FunctionKind::AbsPower { p },
            scale: 1.0,
            lo: -b,
            hi: b,
            lipschitz: p * b.powf(p - 1.0),
            f_max: b.powf(p),
        })
    }

    pub fn constant(c: f64, b: f64) -> Self {
        Self {
            name: "constant".into(),
            kind: FunctionKind::Constant { c },
            scale: 1.0,
            lo: -b,
            hi: b,
            lipschitz: 0.0,
            f_max: c.abs(),
        }
    }

    /// User-supplied table, interpolated linearly and held constant outside.
    pub fn table(name: impl Into<String>, xs: Vec<f64>, ys: Vec<f64>) -> Result<Self> {
        if xs.len() < 2 || xs.len() != ys.len() {
            return Err(Error::InvalidInput(
                "a function table needs at least two (x, y) points of equal length".into(),
            ));
        }
        if xs.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidInput("table abscissae must be strictly increasing".into()));
        }
        if xs.iter().chain(&ys).any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("table entries must be finite".into()));
        }
        let lipschitz = xs
            .windows(2)
            .zip(ys.windows(2))
            .map(|(x, y)| ((y[1] - y[0]) / (x[1] - x[0])).abs())
            .fold(0.0, f64::max);
        let f_max = ys.iter().fold(0.0_f64, |acc, y| acc.max(y.abs()));
        Ok(Self {
            name: name.into(),
            lo: xs[0],
            hi: xs[xs.len() - 1],
            kind: FunctionKind::Table { xs, ys },
            scale: 1.0,
            lipschitz,
            f_max,
        })
    }

    /// `s * f`, with `K` and `f_max` scaled by `|s|`.
    pub fn scaled(mut self, s: f64) -> Self {
        self.scale *= s;
        self.lipschitz *= s.abs();
        self.f_max *= s.abs();
        self
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn eval(&self, x: f64) -> f64 {
        let base = match &self.kind {
            FunctionKind::Power { p } => x.powi(*p as i32),
            FunctionKind::AbsPower { p } => x.abs().powf(*p),
            FunctionKind::Constant { c } => *c,
            FunctionKind::Table { xs, ys } => interpolate(xs, ys, x),
        };
        self.scale * base
    }

    /// Evaluates at `x` clamped into the interval.
    pub fn eval_clamped(&self, x: f64) -> f64 {
        self.eval(x.clamp(self.lo, self.hi))
    }

    pub fn contains(&self, x: f64, tol: f64) -> bool {
        x >= self.lo - tol && x <= self.hi + tol
    }

    /// Half-width `b` of a symmetric interval (or the larger endpoint modulus).
    pub fn half_width(&self) -> f64 {
        self.lo.abs().max(self.hi.abs())
    }
}

impl fmt::Display for SpectralFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} on [{}, {}] (K = {}, f_max = {})", self.name, self.lo, self.hi, self.lipschitz, self.f_max)
    }
}

fn interpolate(xs: &[f64], ys: &[f64], x: f64) -> f64 {
    if x <= xs[0] {
        return ys[0];
    }
    let last = xs.len() - 1;
    if x >= xs[last] {
        return ys[last];
    }
    let k = xs.partition_point(|&v| v <= x) - 1;
    let t = (x - xs[k]) / (xs[k + 1] - xs[k]);
    ys[k] + t * (ys[k + 1] - ys[k])
}

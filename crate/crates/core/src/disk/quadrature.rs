//! Half-line integrals `int_{u0}^inf e^{-s u} u^m du` after the substitution `u = ln(1/r)`.
//!
//! `int_0^R r^{s-1} L^m dr` becomes exactly this with `u0 = ln(1/R)`.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

const ORDER: usize = 16;
const REL_TOL: f64 = 1e-8;
const MAX_PANELS: usize = 1 << 16;
const ZERO_EXP: f64 = 1e-12;

fn legendre_rule() -> &'static ([f64; ORDER], [f64; ORDER]) {
    static RULE: OnceLock<([f64; ORDER], [f64; ORDER])> = OnceLock::new();
    RULE.get_or_init(|| {
        let mut x = [0.0; ORDER];
        let mut w = [0.0; ORDER];
        let n = ORDER as f64;
        for i in 0..ORDER {
            let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, z);
                for k in 2..=ORDER {
                    let k = k as f64;
                    let p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n * (z * p1 - p0) / (z * z - 1.0);
                let dz = p1 / dp;
                z -= dz;
                if dz.abs() < 1e-16 {
                    break;
                }
            }
            x[i] = z;
            w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        }
        (x, w)
    })
}

/// Composite Gauss-Legendre on `[0, 1]` with `panels` equal panels.
fn composite(f: &dyn Fn(f64) -> f64, panels: usize) -> f64 {
    let (x, w) = legendre_rule();
    let h = 1.0 / panels as f64;
    let mut total = 0.0;
    for p in 0..panels {
        let mid = (p as f64 + 0.5) * h;
        let mut acc = 0.0;
        for i in 0..ORDER {
            acc += w[i] * f(mid + 0.5 * h * x[i]);
        }
        total += 0.5 * h * acc;
    }
    total
}

/// Outcome of an adaptive run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub panels: usize,
}

/// Integrates `f(u)` over `[u0, inf)` through `u = u0 + t/(1-t)`, doubling the panel count
/// from `start_panels` until the relative change drops below `1e-8`.
pub fn integrate_half_line(f: &dyn Fn(f64) -> f64, u0: f64, start_panels: usize) -> Integral {
    let g = |t: f64| {
        let s = 1.0 - t;
        f(u0 + t / s) / (s * s)
    };
    let mut panels = start_panels.max(1);
    let mut prev = composite(&g, panels);
    loop {
        panels *= 2;
        let next = composite(&g, panels);
        if (next - prev).abs() <= REL_TOL * next.abs() || next == 0.0 || panels >= MAX_PANELS {
            return Integral {
                value: next,
                panels,
            };
        }
        prev = next;
    }
}

/// `int_{u0}^inf e^{-s u} u^m du` is finite.
pub fn converges(s: f64, m: i32) -> bool {
    if s > ZERO_EXP {
        true
    } else if s < -ZERO_EXP {
        false
    } else {
        m < -1
    }
}

/// Memoized evaluator for `int_{u0}^inf e^{-s u} u^m du`.
#[derive(Debug, Default)]
pub struct Quadrature {
    pub start_panels: usize,
    cache: Mutex<HashMap<(u64, i32, u64), f64>>,
}

impl Clone for Quadrature {
    fn clone(&self) -> Self {
        Quadrature::new(self.start_panels)
    }
}

impl Quadrature {
    pub fn new(start_panels: usize) -> Self {
        Quadrature {
            start_panels: start_panels.max(1),
            cache: Mutex::new(HashMap::new()),
        }
    }

    /// Same rule with twice the starting resolution.
    pub fn doubled(&self) -> Self {
        Quadrature::new(self.start_panels * 2)
    }

    /// `None` when the integral diverges.
    pub fn exp_log_moment(&self, s: f64, m: i32, u0: f64) -> Option<f64> {
        if !converges(s, m) {
            return None;
        }
        let s = if s.abs() <= ZERO_EXP { 0.0 } else { s };
        let key = (s.to_bits(), m, u0.to_bits());
        if let Some(v) = self.cache.lock().expect("quadrature cache").get(&key) {
            return Some(*v);
        }
        let f = move |u: f64| (-s * u).exp() * u.powi(m);
        let v = integrate_half_line(&f, u0, self.start_panels).value;
        self.cache.lock().expect("quadrature cache").insert(key, v);
        Some(v)
    }
}

//! Flattened polynomial system evaluation for the tracking hot loop.
//!
//! `Polynomial` stores dense exponent vectors, which is convenient for
//! algebra but wasteful to walk at every predictor and corrector step. A
//! `CompiledSystem` flattens the system and its symbolic Jacobian into
//! coefficient/sparse-factor arrays, and evaluates them through per-variable
//! power tables. Terms touch only the variables they actually contain, which
//! matters for systems like distance constraints where each term involves two
//! or three of seventeen variables.

use crate::poly::PolySystem;
use crate::C64;

const EXP_BITS: u32 = 8;
const EXP_MASK: u32 = (1 << EXP_BITS) - 1;

#[derive(Debug, Clone, Default)]
struct FlatPoly {
    coeffs: Vec<C64>,
    /// term i owns factors[term_bounds[i]..term_bounds[i+1]]
    term_bounds: Vec<u32>,
    /// packed (var << 8) | exponent
    factors: Vec<u32>,
}

impl FlatPoly {
    fn from_terms<'a>(terms: impl Iterator<Item = (&'a [u32], C64)>) -> Self {
        let mut flat = FlatPoly::default();
        flat.term_bounds.push(0);
        for (exponents, coeff) in terms {
            flat.coeffs.push(coeff);
            for (v, &e) in exponents.iter().enumerate() {
                if e > 0 {
                    debug_assert!(e <= EXP_MASK, "exponent exceeds power-table packing");
                    flat.factors.push(((v as u32) << EXP_BITS) | e);
                }
            }
            flat.term_bounds.push(flat.factors.len() as u32);
        }
        flat
    }

    #[inline]
    fn eval(&self, powers: &[C64], stride: usize) -> C64 {
        let mut sum = C64::new(0.0, 0.0);
        for (i, &coeff) in self.coeffs.iter().enumerate() {
            let lo = self.term_bounds[i] as usize;
            let hi = self.term_bounds[i + 1] as usize;
            let mut acc = coeff;
            for &packed in &self.factors[lo..hi] {
                let v = (packed >> EXP_BITS) as usize;
                let e = (packed & EXP_MASK) as usize;
                acc *= powers[v * stride + e];
            }
            sum += acc;
        }
        sum
    }
}

/// A polynomial system and its Jacobian in evaluation-ready form.
pub struct CompiledSystem {
    nvars: usize,
    npolys: usize,
    values: Vec<FlatPoly>,
    /// row-major npolys x nvars
    jacobian: Vec<FlatPoly>,
    degrees: Vec<u32>,
    stride: usize,
}

/// Per-thread scratch for power tables.
pub struct EvalWorkspace {
    powers: Vec<C64>,
}

impl CompiledSystem {
    pub fn compile(system: &PolySystem) -> Self {
        let nvars = system.nvars();
        let npolys = system.len();
        let max_deg = system
            .polys
            .iter()
            .flat_map(|p| p.terms().iter().flat_map(|t| t.exponents.iter().copied()))
            .max()
            .unwrap_or(0);
        let stride = max_deg as usize + 1;
        let values = system
            .polys
            .iter()
            .map(|p| {
                FlatPoly::from_terms(p.terms().iter().map(|t| (t.exponents.as_slice(), t.coeff)))
            })
            .collect();
        let jacobian = system
            .jacobian()
            .into_iter()
            .flatten()
            .map(|p| {
                FlatPoly::from_terms(p.terms().iter().map(|t| (t.exponents.as_slice(), t.coeff)))
            })
            .collect();
        let degrees = system.polys.iter().map(|p| p.degree().unwrap_or(0)).collect();
        CompiledSystem { nvars, npolys, values, jacobian, degrees, stride }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn npolys(&self) -> usize {
        self.npolys
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    pub fn workspace(&self) -> EvalWorkspace {
        EvalWorkspace { powers: vec![C64::new(0.0, 0.0); self.nvars * self.stride] }
    }

    /// Computes all powers z_v^e for e = 0..=max_deg once per point.
    pub fn fill_powers(&self, z: &[C64], ws: &mut EvalWorkspace) {
        debug_assert_eq!(z.len(), self.nvars);
        for v in 0..self.nvars {
            let base = v * self.stride;
            ws.powers[base] = C64::new(1.0, 0.0);
            for e in 1..self.stride {
                ws.powers[base + e] = ws.powers[base + e - 1] * z[v];
            }
        }
    }

    /// System value at the point loaded in `ws`; `out` has npolys entries.
    pub fn eval_values(&self, ws: &EvalWorkspace, out: &mut [C64]) {
        debug_assert_eq!(out.len(), self.npolys);
        for (o, p) in out.iter_mut().zip(&self.values) {
            *o = p.eval(&ws.powers, self.stride);
        }
    }

    /// Jacobian at the point loaded in `ws`; `out` is row-major npolys x nvars.
    pub fn eval_jacobian(&self, ws: &EvalWorkspace, out: &mut [C64]) {
        debug_assert_eq!(out.len(), self.npolys * self.nvars);
        for (o, p) in out.iter_mut().zip(&self.jacobian) {
            *o = p.eval(&ws.powers, self.stride);
        }
    }

    /// Convenience for one-off evaluations.
    pub fn values_at(&self, z: &[C64]) -> Vec<C64> {
        let mut ws = self.workspace();
        self.fill_powers(z, &mut ws);
        let mut out = vec![C64::new(0.0, 0.0); self.npolys];
        self.eval_values(&ws, &mut out);
        out
    }

    pub fn jacobian_at(&self, z: &[C64]) -> Vec<C64> {
        let mut ws = self.workspace();
        self.fill_powers(z, &mut ws);
        let mut out = vec![C64::new(0.0, 0.0); self.npolys * self.nvars];
        self.eval_jacobian(&ws, &mut out);
        out
    }
}

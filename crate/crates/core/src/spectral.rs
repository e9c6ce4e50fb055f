//! Coupling Hamiltonians, the transformed (dark/bright) basis, the global
//! dark state, and closed-form eigensystems of the four-level subsystem.
//!
//! Basis orderings: four-level matrices use (|b⟩, |c⟩, |d⟩, |e⟩); the
//! five-level matrix prepends |a⟩. Two-component states live on (|c⟩, |d⟩).

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::{self, hermitian_eigen};
use crate::params::{derive_couplings, DerivedCoupling, FieldConfig, Situation};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

const B: usize = 0;
const C: usize = 1;
const D: usize = 2;
const E: usize = 3;

pub type Matrix4 = [[Complex64; 4]; 4];
pub type Matrix5 = [[Complex64; 5]; 5];

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Hamiltonian4 {
    pub matrix: Matrix4,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Hamiltonian5 {
    pub matrix: Matrix5,
}

fn hermiticity_defect<const N: usize>(m: &[[Complex64; N]; N]) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..N {
        for j in 0..N {
            worst = worst.max((m[i][j] - m[j][i].conj()).norm());
        }
    }
    worst
}

fn frobenius<const N: usize>(m: &[[Complex64; N]; N]) -> f64 {
    m.iter().flatten().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

impl Hamiltonian4 {
    pub fn hermiticity_defect(&self) -> f64 {
        hermiticity_defect(&self.matrix)
    }

    pub fn norm(&self) -> f64 {
        frobenius(&self.matrix)
    }

    pub fn apply(&self, v: &[Complex64; 4]) -> [Complex64; 4] {
        numerics::mat_vec(&self.matrix, v)
    }

    /// Largest elementwise difference to `other`.
    pub fn max_deviation(&self, other: &Hamiltonian4) -> f64 {
        self.matrix
            .iter()
            .flatten()
            .zip(other.matrix.iter().flatten())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

impl Hamiltonian5 {
    pub fn hermiticity_defect(&self) -> f64 {
        hermiticity_defect(&self.matrix)
    }

    pub fn norm(&self) -> f64 {
        frobenius(&self.matrix)
    }

    pub fn apply(&self, v: &[Complex64; 5]) -> [Complex64; 5] {
        numerics::mat_vec(&self.matrix, v)
    }

    /// Lower-right 4×4 block over (|b⟩, |c⟩, |d⟩, |e⟩).
    pub fn control_block(&self) -> Hamiltonian4 {
        Hamiltonian4 {
            matrix: std::array::from_fn(|i| std::array::from_fn(|j| self.matrix[i + 1][j + 1])),
        }
    }
}

/// −Ω₁*|c⟩⟨b| − Ω₂*|d⟩⟨b| − Ω₃*|c⟩⟨e| − Ω₄*|d⟩⟨e| + H.c.
pub fn build_h4(cfg: &FieldConfig) -> Hamiltonian4 {
    let [o1, o2, o3, o4] = cfg.control_values();
    let mut m = [[ZERO; 4]; 4];
    m[C][B] = -o1.conj();
    m[D][B] = -o2.conj();
    m[C][E] = -o3.conj();
    m[D][E] = -o4.conj();
    m[B][C] = -o1;
    m[B][D] = -o2;
    m[E][C] = -o3;
    m[E][D] = -o4;
    Hamiltonian4 { matrix: m }
}

/// Adds the probe coupling −(Ω_p*|a⟩⟨b| + Ω_p|b⟩⟨a|) to the control block.
pub fn build_h5(cfg: &FieldConfig) -> Hamiltonian5 {
    let h4 = build_h4(cfg);
    let op = cfg.probe.value();
    let mut m = [[ZERO; 5]; 5];
    for i in 0..4 {
        for j in 0..4 {
            m[i + 1][j + 1] = h4.matrix[i][j];
        }
    }
    m[0][1] = -op.conj();
    m[1][0] = -op;
    Hamiltonian5 { matrix: m }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BasisStates {
    /// (Ω₄|c⟩ − Ω₃|d⟩)/Ω
    pub d_e: [Complex64; 2],
    /// (Ω₃*|c⟩ + Ω₄*|d⟩)/Ω
    pub b_e: [Complex64; 2],
    /// (Ω₂|c⟩ − Ω₁|d⟩)/√(|Ω₁|²+|Ω₂|²)
    pub d_b: [Complex64; 2],
    /// (Ω₁*|c⟩ + Ω₂*|d⟩)/√(|Ω₁|²+|Ω₂|²)
    pub b_b: [Complex64; 2],
    /// Global dark state over (|a⟩, |b⟩, |c⟩, |d⟩, |e⟩); `None` when β = 0.
    pub dark5: Option<[Complex64; 5]>,
}

pub fn inner2(u: &[Complex64; 2], v: &[Complex64; 2]) -> Complex64 {
    u[0].conj() * v[0] + u[1].conj() * v[1]
}

pub fn transformed_basis(cfg: &FieldConfig) -> Result<BasisStates> {
    let omega = cfg.omega_total();
    if omega == 0.0 {
        return Err(Error::ZeroBrightCoupling);
    }
    let omega_b = cfg.omega_probe_side();
    if omega_b == 0.0 {
        return Err(Error::ZeroProbeSideCoupling);
    }
    let [o1, o2, o3, o4] = cfg.control_values();
    let dark5 = match dark_state(cfg) {
        Ok(v) => Some(v),
        Err(Error::NoDarkState) => None,
        Err(e) => return Err(e),
    };
    Ok(BasisStates {
        d_e: [o4 / omega, -o3 / omega],
        b_e: [o3.conj() / omega, o4.conj() / omega],
        d_b: [o2 / omega_b, -o1 / omega_b],
        b_b: [o1.conj() / omega_b, o2.conj() / omega_b],
        dark5,
    })
}

/// −β|D_e⟩⟨b| − α|B_e⟩⟨b| − Ω|B_e⟩⟨e| + H.c., assembled in the bare basis.
pub fn reconstruct_h4(couplings: &DerivedCoupling, basis: &BasisStates) -> Hamiltonian4 {
    let mut m = [[ZERO; 4]; 4];
    for (k, row) in [C, D].into_iter().enumerate() {
        let to_b = -couplings.beta * basis.d_e[k] - couplings.alpha * basis.b_e[k];
        let to_e = -couplings.omega_total * basis.b_e[k];
        m[row][B] = to_b;
        m[B][row] = to_b.conj();
        m[row][E] = to_e;
        m[E][row] = to_e.conj();
    }
    Hamiltonian4 { matrix: m }
}

/// β*|a⟩ − Ω_p|D_e⟩, which `build_h5` annihilates exactly.
///
/// The conjugate on β is what makes the |b⟩ component of H₅|D⟩ cancel for
/// complex β; for real β it is the same vector as β|a⟩ − Ω_p|D_e⟩.
pub fn dark_state(cfg: &FieldConfig) -> Result<[Complex64; 5]> {
    let couplings = derive_couplings(cfg)?;
    if matches!(couplings.situation, Situation::B | Situation::Degenerate) {
        return Err(Error::NoDarkState);
    }
    let omega = couplings.omega_total;
    let [_, _, o3, o4] = cfg.control_values();
    let op = cfg.probe.value();
    Ok([
        couplings.beta.conj(),
        ZERO,
        -op * o4 / omega,
        op * o3 / omega,
        ZERO,
    ])
}

/// Eigenvalues in ascending order with unit eigenvectors over (b, c, d, e).
///
/// Phase convention: the largest-magnitude component of each eigenvector is
/// real and positive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EigenSystem4 {
    pub eigenvalues: [f64; 4],
    pub eigenvectors: [[Complex64; 4]; 4],
}

impl EigenSystem4 {
    fn from_pairs(mut pairs: Vec<(f64, [Complex64; 4])>) -> Self {
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        Self {
            eigenvalues: std::array::from_fn(|k| pairs[k].0),
            eigenvectors: std::array::from_fn(|k| crate::numerics::fix_phase(pairs[k].1)),
        }
    }

    /// max_k ‖H·v_k − λ_k·v_k‖.
    pub fn max_residual(&self, h: &Hamiltonian4) -> f64 {
        (0..4)
            .map(|k| {
                let hv = h.apply(&self.eigenvectors[k]);
                hv.iter()
                    .zip(self.eigenvectors[k].iter())
                    .map(|(a, b)| (a - self.eigenvalues[k] * b).norm_sqr())
                    .sum::<f64>()
                    .sqrt()
            })
            .fold(0.0, f64::max)
    }
}

/// Dense numeric diagonalization (Jacobi), the oracle for the closed forms.
pub fn numeric_eigensystem(h: &Hamiltonian4) -> EigenSystem4 {
    let e = hermitian_eigen(&h.matrix);
    EigenSystem4 {
        eigenvalues: e.values,
        eigenvectors: e.vectors,
    }
}

/// S = |α|²+|β|²+Ω², X = |α|²−|β|²+Ω², Y = √(S²−4|β|²Ω²).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SituationAInvariants {
    pub s: f64,
    pub x: f64,
    pub y: f64,
}

pub fn situation_a_invariants(c: &DerivedCoupling) -> SituationAInvariants {
    let a2 = c.alpha.norm_sqr();
    let b2 = c.beta.norm_sqr();
    let w2 = c.omega_total * c.omega_total;
    let s = a2 + b2 + w2;
    let x = a2 - b2 + w2;
    // S² − 4|β|²Ω² = (|α|²+(|β|−Ω)²)(|α|²+(|β|+Ω)²), which avoids cancellation
    let bm = c.beta.norm() - c.omega_total;
    let bp = c.beta.norm() + c.omega_total;
    let y = ((a2 + bm * bm) * (a2 + bp * bp)).sqrt();
    SituationAInvariants { s, x, y }
}

fn compose(cb: Complex64, ce: Complex64, c_be: Complex64, c_de: Complex64, basis: &BasisStates) -> [Complex64; 4] {
    let mut v = [ZERO; 4];
    v[B] = cb;
    v[E] = ce;
    for k in 0..2 {
        v[C + k] = c_be * basis.b_e[k] + c_de * basis.d_e[k];
    }
    v
}

fn expect_situation(c: &DerivedCoupling, expected: Situation) -> Result<()> {
    if c.situation != expected {
        return Err(Error::WrongSituation {
            expected,
            found: c.situation,
        });
    }
    Ok(())
}

/// Closed-form eigensystem when α ≠ 0 and β ≠ 0.
///
/// Eigenvalues ±√((S−Y)/2), ±√((S+Y)/2). Each tabulated vector
/// (α*(S∓Y)/(Ω(X∓Y)))|b⟩ ∓′ √(S∓Y)/(√2Ω)|B_e⟩ ∓′ … |D_e⟩ + |e⟩ carries the
/// eigenvalue of sign opposite to its |B_e⟩ coefficient.
pub fn eigensystem_a(cfg: &FieldConfig) -> Result<EigenSystem4> {
    let c = derive_couplings(cfg)?;
    expect_situation(&c, Situation::A)?;
    let basis = basis_without_probe_side(cfg)?;
    let SituationAInvariants { s, x, y } = situation_a_invariants(&c);
    let omega = c.omega_total;
    let mut pairs = Vec::with_capacity(4);
    for branch in [-1.0, 1.0] {
        let sy = (s + branch * y).max(0.0);
        let xy = x + branch * y;
        let root = (sy / 2.0).sqrt();
        let cb = c.alpha.conj() * (sy / (omega * xy));
        for sign in [-1.0, 1.0] {
            let c_be = Complex64::new(sign * sy.sqrt() / (2f64.sqrt() * omega), 0.0);
            let c_de = sign * c.alpha.conj() * c.beta * ((2.0 * sy).sqrt() / (omega * xy));
            pairs.push((-sign * root, compose(cb, ONE, c_be, c_de, &basis)));
        }
    }
    Ok(EigenSystem4::from_pairs(pairs))
}

/// Closed-form eigensystem when β = 0: eigenvalues {−√(|α|²+Ω²), 0, 0, +√(|α|²+Ω²)}.
///
/// The zero-energy pair is (−Ω/α)|b⟩ + |e⟩ followed by the decoupled |D_e⟩.
pub fn eigensystem_b(cfg: &FieldConfig) -> Result<EigenSystem4> {
    let c = derive_couplings(cfg)?;
    expect_situation(&c, Situation::B)?;
    let basis = basis_without_probe_side(cfg)?;
    let omega = c.omega_total;
    let r = (c.alpha.norm_sqr() + omega * omega).sqrt();
    let n1 = compose(-omega / c.alpha, ONE, ZERO, ZERO, &basis);
    let n2 = compose(ZERO, ZERO, ZERO, ONE, &basis);
    let cb = c.alpha.conj() / omega;
    let n3 = compose(cb, ONE, Complex64::new(-r / omega, 0.0), ZERO, &basis);
    let n4 = compose(cb, ONE, Complex64::new(r / omega, 0.0), ZERO, &basis);
    // stable sort keeps n1 ahead of n2 within the degenerate pair
    Ok(EigenSystem4::from_pairs(vec![
        (0.0, n1),
        (0.0, n2),
        (r, n3),
        (-r, n4),
    ]))
}

/// D_e/B_e only need Ω > 0; the eigensystems do not use D_b/B_b.
fn basis_without_probe_side(cfg: &FieldConfig) -> Result<BasisStates> {
    let omega = cfg.omega_total();
    if omega == 0.0 {
        return Err(Error::ZeroBrightCoupling);
    }
    let [_, _, o3, o4] = cfg.control_values();
    Ok(BasisStates {
        d_e: [o4 / omega, -o3 / omega],
        b_e: [o3.conj() / omega, o4.conj() / omega],
        d_b: [ZERO; 2],
        b_b: [ZERO; 2],
        dark5: None,
    })
}

/// Picks the closed form matching the configuration's situation, falling back
/// to the numeric eigensolver for situations without one.
pub fn eigensystem(cfg: &FieldConfig) -> Result<(EigenSystem4, &'static str)> {
    let c = derive_couplings(cfg)?;
    match c.situation {
        Situation::A => Ok((eigensystem_a(cfg)?, "closed-form-a")),
        Situation::B => Ok((eigensystem_b(cfg)?, "closed-form-b")),
        _ => Ok((numeric_eigensystem(&build_h4(cfg)), "numeric")),
    }
}

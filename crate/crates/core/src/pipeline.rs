//! The end-to-end wedge solve: rational factorisation, `λ` coefficients,
//! isolated guess, coupling matrices and iteration.

use crate::arrays::{isolated_guess, ArrayCoeffs};
use crate::error::Result;
use crate::factorization::{aaa_fit, factor_rational, lambda_from_rational, AaaOptions, LambdaCoeffs, RationalFactors, RationalKernel};
use crate::field_oracle::{wedge_scatterers, ScattererSet};
use crate::kernel::ProblemConfig;
use crate::wedge::{build_matrices, iterate, IterationMatrices, ScatteringState};

/// Rational fit of the kernel with its factors and `λ_0..λ_M`.
#[derive(Clone, Debug)]
pub struct Prepared {
    pub cfg: ProblemConfig,
    pub rational: RationalKernel,
    pub factors: RationalFactors,
    pub lambda: LambdaCoeffs,
}

impl Prepared {
    pub fn new(cfg: &ProblemConfig, opts: &AaaOptions, m: usize) -> Result<Self> {
        cfg.validate()?;
        let rational = aaa_fit(cfg, opts)?;
        let factors = factor_rational(&rational, rational.anchor);
        let lambda = lambda_from_rational(&rational, m)?;
        Ok(Self {
            cfg: *cfg,
            rational,
            factors,
            lambda,
        })
    }

    pub fn isolated(&self, m: usize) -> Result<(ArrayCoeffs, ArrayCoeffs)> {
        isolated_guess(&self.cfg, &self.lambda, &self.factors, m)
    }

    pub fn matrices(&self, m: usize) -> Result<IterationMatrices> {
        build_matrices(&self.cfg, &self.lambda.truncated(m)?, m)
    }
}

/// Result of the iterative scheme together with its inputs.
#[derive(Clone, Debug)]
pub struct WedgeSolution {
    pub top: ArrayCoeffs,
    pub bottom: ArrayCoeffs,
    pub mats: IterationMatrices,
    pub state: ScatteringState,
}

impl WedgeSolution {
    pub fn scatterers(&self, cfg: &ProblemConfig) -> ScattererSet {
        wedge_scatterers(cfg, &self.state.a, &self.state.b)
    }

    pub fn isolated_scatterers(&self, cfg: &ProblemConfig) -> ScattererSet {
        wedge_scatterers(cfg, &self.top.values, &self.bottom.values)
    }
}

pub fn solve_wedge(prepared: &Prepared, m: usize, j_max: usize, tol: f64) -> Result<WedgeSolution> {
    let (top, bottom) = prepared.isolated(m)?;
    let mats = prepared.matrices(m)?;
    let state = iterate(&mats, &top, &bottom, j_max, tol)?;
    Ok(WedgeSolution {
        top,
        bottom,
        mats,
        state,
    })
}

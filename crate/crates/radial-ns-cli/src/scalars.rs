//! `scalars` subcommand: direct access to the convex-function kernel.

use clap::{Subcommand, ValueEnum};
use radial_ns::scalar::{
    branch_inverse, convex_eval, envelope_bounds, omega_bounds, Branch, ConvexFnId, EnvelopeParams, OmegaKind,
    ScalarError,
};
use serde_json::{json, Value};

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum FnArg {
    G,
    Psi,
    H,
}

impl From<FnArg> for ConvexFnId {
    fn from(f: FnArg) -> Self {
        match f {
            FnArg::G => ConvexFnId::G,
            FnArg::Psi => ConvexFnId::Psi,
            FnArg::H => ConvexFnId::H,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum BranchArg {
    Left,
    Right,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum OmegaArg {
    F1,
    F2,
    F3,
    Omega1,
    Omega2,
}

impl From<OmegaArg> for OmegaKind {
    fn from(o: OmegaArg) -> Self {
        match o {
            OmegaArg::F1 => OmegaKind::F1,
            OmegaArg::F2 => OmegaKind::F2,
            OmegaArg::F3 => OmegaKind::F3,
            OmegaArg::Omega1 => OmegaKind::Omega1,
            OmegaArg::Omega2 => OmegaKind::Omega2,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum ScalarCmd {
    /// Evaluate G, psi or H at each z.
    Eval {
        #[arg(long, value_enum)]
        function: FnArg,
        #[arg(required = true, allow_negative_numbers = true)]
        z: Vec<f64>,
    },
    /// Branch inverse at each level y.
    Inverse {
        #[arg(long, value_enum)]
        function: FnArg,
        #[arg(long, value_enum)]
        branch: BranchArg,
        #[arg(required = true, allow_negative_numbers = true)]
        y: Vec<f64>,
    },
    /// Specific-volume envelope at (z, t).
    Envelope {
        #[arg(long)]
        a: f64,
        #[arg(long)]
        c0: f64,
        #[arg(long, default_value_t = 3)]
        n: u32,
        #[arg(long)]
        beta: f64,
        #[arg(long)]
        z: f64,
        #[arg(long)]
        t: f64,
    },
    /// Set-function bound for a set of weighted measure `measure`.
    Omega {
        #[arg(long, value_enum)]
        kind: OmegaArg,
        #[arg(long)]
        measure: f64,
        #[arg(long)]
        z: f64,
    },
}

pub fn eval_scalar(cmd: &ScalarCmd) -> Result<Value, ScalarError> {
    Ok(match cmd {
        ScalarCmd::Eval { function, z } => {
            let f = ConvexFnId::from(*function);
            let vals = z.iter().map(|&z| convex_eval(f, z)).collect::<Result<Vec<_>, _>>()?;
            json!({ "function": f, "z": z, "value": vals })
        }
        ScalarCmd::Inverse { function, branch, y } => {
            let f = ConvexFnId::from(*function);
            let b = match branch {
                BranchArg::Left => Branch::Left,
                BranchArg::Right => Branch::Right,
            };
            let vals = y.iter().map(|&y| branch_inverse(f, b, y)).collect::<Result<Vec<_>, _>>()?;
            json!({ "function": f, "branch": b, "y": y, "inverse": vals })
        }
        ScalarCmd::Envelope { a, c0, n, beta, z, t } => {
            let p = EnvelopeParams { a: *a, c0: *c0, n: *n, beta: *beta };
            json!({ "params": p, "z": z, "t": t, "envelope": envelope_bounds(&p, *z, *t)? })
        }
        ScalarCmd::Omega { kind, measure, z } => {
            let k = OmegaKind::from(*kind);
            json!({ "kind": k, "measure": measure, "z": z, "value": omega_bounds(*measure, *z, k)? })
        }
    })
}

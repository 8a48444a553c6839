//! Central-difference gradient checking.
//!
//! Given a scalar loss as a *pure function of the parameter map*, perturbs
//! every entry of every parameter by `±h`, measures `(f(θ+h) − f(θ−h)) / 2h`,
//! and compares against the analytic gradient.  This is the independent
//! oracle for the whole autodiff tape: it knows nothing about how the loss
//! is computed.

use super::adam::ParamMap;

/// Result of checking one parameter group.
#[derive(Debug, Clone)]
pub struct GroupReport {
    /// Parameter name.
    pub name: String,
    /// Worst relative error across the group's entries.
    pub max_rel_err: f64,
    /// Flat index of the worst entry.
    pub worst_index: usize,
    /// Analytic gradient at the worst entry.
    pub analytic: f64,
    /// Numeric gradient at the worst entry.
    pub numeric: f64,
}

/// Result of a full gradient check.
#[derive(Debug, Clone)]
pub struct GradCheckReport {
    /// One entry per parameter group, in name order.
    pub groups: Vec<GroupReport>,
    /// Worst relative error overall.
    pub max_rel_err: f64,
    /// Name of the group holding the worst entry.
    pub worst_group: String,
}

impl GradCheckReport {
    /// True iff every entry is within `tol`.
    pub fn passes(&self, tol: f64) -> bool {
        self.max_rel_err <= tol
    }
}

/// Relative error with a floor on the denominator so that comparing two
/// near-zero numbers does not amplify finite-difference noise into spurious
/// failures; a floor of `f` makes the check an absolute comparison at
/// threshold `tol·f` once both gradients fall below `f`.
fn rel_err(a: f64, n: f64, floor: f64) -> f64 {
    (a - n).abs() / (a.abs() + n.abs()).max(floor)
}

/// Checks `analytic` against central differences of `loss` around `params`,
/// with a denominator floor of `1e-6` (see [`check_grads_floor`]).
pub fn check_grads(
    loss: &mut dyn FnMut(&ParamMap) -> f64,
    params: &ParamMap,
    analytic: &ParamMap,
    h: f64,
) -> GradCheckReport {
    check_grads_floor(loss, params, analytic, h, 1e-6)
}

/// Checks `analytic` against central differences of `loss` around `params`.
///
/// `loss` must be deterministic: calling it twice with the same map must
/// return the same value, otherwise the differences measure noise.  `floor`
/// bounds the relative-error denominator from below; see [`rel_err`].
pub fn check_grads_floor(
    loss: &mut dyn FnMut(&ParamMap) -> f64,
    params: &ParamMap,
    analytic: &ParamMap,
    h: f64,
    floor: f64,
) -> GradCheckReport {
    assert!(h > 0.0, "step size must be positive");
    let mut work = params.clone();
    let mut groups = Vec::new();
    let mut worst = (0.0f64, String::new());

    for (name, theta) in params {
        let zeros = ndarray::Array2::zeros(theta.dim());
        let grad = analytic.get(name).unwrap_or(&zeros);
        assert_eq!(grad.dim(), theta.dim(), "analytic shape mismatch for '{name}'");

        let mut group = GroupReport {
            name: name.clone(),
            max_rel_err: 0.0,
            worst_index: 0,
            analytic: 0.0,
            numeric: 0.0,
        };
        let n_entries = theta.len();
        for idx in 0..n_entries {
            let (r, c) = (idx / theta.ncols(), idx % theta.ncols());
            let original = theta[[r, c]];

            work.get_mut(name).unwrap()[[r, c]] = original + h;
            let f_plus = loss(&work);
            work.get_mut(name).unwrap()[[r, c]] = original - h;
            let f_minus = loss(&work);
            work.get_mut(name).unwrap()[[r, c]] = original;

            let numeric = (f_plus - f_minus) / (2.0 * h);
            let a = grad[[r, c]];
            let err = rel_err(a, numeric, floor);
            if err > group.max_rel_err {
                group.max_rel_err = err;
                group.worst_index = idx;
                group.analytic = a;
                group.numeric = numeric;
            }
        }
        if group.max_rel_err > worst.0 {
            worst = (group.max_rel_err, name.clone());
        }
        groups.push(group);
    }

    GradCheckReport { groups, max_rel_err: worst.0, worst_group: worst.1 }
}

//! Adam optimiser over named parameter groups.
//!
//! Parameters live in a [`ParamMap`] (name → matrix) owned by the model;
//! the optimiser keeps first/second-moment state per name and updates the
//! map in place.  Weight decay is the classic L2 form folded into the
//! gradient (`g ← g + wd·θ`) before the moment updates, so a parameter that
//! received no gradient this step is neither updated nor decayed.

use std::collections::BTreeMap;

use super::tape::Mat;

/// Named parameter (or gradient) collection.  `BTreeMap` so that iteration
/// order — and therefore every floating-point reduction downstream — is
/// deterministic.
pub type ParamMap = BTreeMap<String, Mat>;

/// Adam with bias-corrected moment estimates.
#[derive(Debug, Clone)]
pub struct Adam {
    lr: f64,
    beta1: f64,
    beta2: f64,
    eps: f64,
    weight_decay: f64,
    t: u64,
    m: BTreeMap<String, Mat>,
    v: BTreeMap<String, Mat>,
}

impl Adam {
    /// Adam with the conventional defaults: `β₁ = 0.9`, `β₂ = 0.999`,
    /// `ε = 1e-8`, no weight decay.
    pub fn new(lr: f64) -> Adam {
        Adam {
            lr,
            beta1: 0.9,
            beta2: 0.999,
            eps: 1e-8,
            weight_decay: 0.0,
            t: 0,
            m: BTreeMap::new(),
            v: BTreeMap::new(),
        }
    }

    /// Sets the L2 weight-decay coefficient.
    pub fn with_weight_decay(mut self, wd: f64) -> Adam {
        self.weight_decay = wd;
        self
    }

    /// Overrides the moment-decay rates.
    pub fn with_betas(mut self, beta1: f64, beta2: f64) -> Adam {
        self.beta1 = beta1;
        self.beta2 = beta2;
        self
    }

    /// Overrides the denominator fuzz term.
    pub fn with_eps(mut self, eps: f64) -> Adam {
        self.eps = eps;
        self
    }

    /// Learning rate.
    pub fn lr(&self) -> f64 {
        self.lr
    }

    /// Number of completed steps.
    pub fn steps(&self) -> u64 {
        self.t
    }

    /// Applies one update.  Only parameters present in `grads` move.
    pub fn step(&mut self, params: &mut ParamMap, grads: &ParamMap) {
        self.t += 1;
        let bc1 = 1.0 - self.beta1.powi(self.t as i32);
        let bc2 = 1.0 - self.beta2.powi(self.t as i32);
        for (name, p) in params.iter_mut() {
            let Some(g) = grads.get(name) else { continue };
            assert_eq!(g.dim(), p.dim(), "gradient shape mismatch for '{name}'");
            let g = if self.weight_decay != 0.0 {
                g + &p.mapv(|w| self.weight_decay * w)
            } else {
                g.clone()
            };
            let m = self
                .m
                .entry(name.clone())
                .or_insert_with(|| Mat::zeros(p.dim()));
            let v = self
                .v
                .entry(name.clone())
                .or_insert_with(|| Mat::zeros(p.dim()));
            m.zip_mut_with(&g, |m, &g| *m = self.beta1 * *m + (1.0 - self.beta1) * g);
            v.zip_mut_with(&g, |v, &g| *v = self.beta2 * *v + (1.0 - self.beta2) * g * g);
            for ((p, &m), &v) in p.iter_mut().zip(m.iter()).zip(v.iter()) {
                let m_hat = m / bc1;
                let v_hat = v / bc2;
                *p -= self.lr * m_hat / (v_hat.sqrt() + self.eps);
            }
        }
    }
}

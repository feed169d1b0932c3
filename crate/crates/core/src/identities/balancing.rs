use super::{IdentityError, IdentityReport};
use crate::algebra::Theta;
use crate::scalar::FiniteField;
use crate::volume::VolumeFunctional;

/// `Σ_p θ_{i,p} vol(x_I x_p) = 0` for every row `i` and every height-`d`
/// monomial `x_I` of the space, recomputed from the solved values.
pub fn check_balancing<F: FiniteField>(
    vf: &VolumeFunctional<F>,
    theta: &Theta<F>,
) -> Result<IdentityReport, IdentityError> {
    let space = &vf.space;
    let cx = &space.complex;
    let top = vf.degree();
    let anchors = space.basis(top - 1);
    let mut checked = 0usize;
    let mut nonzero = 0usize;
    for &a in &anchors {
        for i in 0..theta.rows() {
            let mut acc = F::zero();
            for (j, th) in theta.row(i).iter().enumerate() {
                if let Some(m) = cx.multiply(1, j, top - 1, a) {
                    acc = acc + *th * vf.value(m);
                }
            }
            checked += 1;
            if !acc.is_zero() {
                nonzero += 1;
            }
        }
    }
    Ok(IdentityReport {
        identity: "balancing".into(),
        instance: format!("{} rows={checked}", space.describe()),
        left: nonzero.to_string(),
        right: "0".into(),
        pass: nonzero == 0,
        retries: 0,
    })
}

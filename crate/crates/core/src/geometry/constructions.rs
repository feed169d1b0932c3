use super::{GeometryError, LatticePoint, Polytope};

/// `conv(P × {0} ∪ {e_{d+1}})`.
pub fn pyramid(p: &Polytope) -> Polytope {
    let d = p.ambient_dim();
    let mut verts: Vec<LatticePoint> = p
        .vertices()
        .iter()
        .map(|v| {
            let mut w = v.clone();
            w.push(0);
            w
        })
        .collect();
    let mut apex = vec![0; d + 1];
    apex[d] = 1;
    verts.push(apex);
    Polytope::new(&format!("pyr({})", p.name()), verts).expect("pyramid of a valid polytope")
}

pub fn dilate(p: &Polytope, n: i64) -> Result<Polytope, GeometryError> {
    if n < 1 {
        return Err(GeometryError::Scale(format!("dilation factor {n} must be positive")));
    }
    let verts = p.vertices().iter().map(|v| v.iter().map(|x| x * n).collect()).collect();
    Polytope::new(&format!("{}*{}", n, p.name()), verts)
}

/// `P` read against the coarse lattice `N·Z^d` inside the fine lattice `Z^d`.
#[derive(Clone, Debug)]
pub struct SublatticeView {
    pub fine: Polytope,
    /// `P` in coarse coordinates, i.e. `P / N`.
    pub coarse: Polytope,
    pub factor: i64,
    /// Fine lattice points of `P` that are not coarse lattice points.
    pub fine_only: Vec<LatticePoint>,
}

impl SublatticeView {
    pub fn is_coarse(&self, x: &[i64]) -> bool {
        x.iter().all(|c| c % self.factor == 0)
    }

    /// Coarse lattice points of `P`, in fine coordinates.
    pub fn coarse_points(&self) -> Vec<LatticePoint> {
        self.fine.lattice_points(1).iter().filter(|x| self.is_coarse(x)).cloned().collect()
    }
}

pub fn sublattice_view(p: &Polytope, n: i64) -> Result<SublatticeView, GeometryError> {
    if n < 1 {
        return Err(GeometryError::Scale(format!("lattice factor {n} must be positive")));
    }
    if let Some(v) = p.vertices().iter().find(|v| v.iter().any(|c| c % n != 0)) {
        return Err(GeometryError::NotCoarse(v.clone()));
    }
    let coarse_verts = p.vertices().iter().map(|v| v.iter().map(|c| c / n).collect()).collect();
    let coarse = Polytope::new(&format!("{}/{}", p.name(), n), coarse_verts)?;
    let fine_only = p.lattice_points(1).iter().filter(|x| x.iter().any(|c| c % n != 0)).cloned().collect();
    Ok(SublatticeView { fine: p.clone(), coarse, factor: n, fine_only })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::is_idp;

    fn poly(v: &[&[i64]]) -> Polytope {
        Polytope::new("t", v.iter().map(|x| x.to_vec()).collect()).unwrap()
    }

    #[test]
    fn pyramid_counts() {
        let sq = poly(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]]);
        let py = pyramid(&sq);
        assert_eq!(py.lattice_points(1).len(), 5);
        for h in 0..4u32 {
            let expect: usize = (0..=h).map(|l| sq.lattice_points(h - l).len()).sum();
            assert_eq!(py.lattice_points(h).len(), expect);
        }
        let seg = pyramid(&poly(&[&[0], &[1]]));
        assert_eq!(seg.vertices().len(), 3);
        assert_eq!(seg.lattice_points(1).len(), 3);
    }

    #[test]
    fn pyramid_preserves_idp() {
        let reeve = poly(&[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0], &[1, 1, 2]]);
        assert!(!is_idp(&pyramid(&reeve), None).holds());
        assert!(is_idp(&pyramid(&poly(&[&[0], &[2]])), None).holds());
    }

    #[test]
    fn coarsened_triangle() {
        let t = poly(&[&[0, 0], &[0, 2], &[2, 0]]);
        let v = sublattice_view(&t, 2).unwrap();
        assert_eq!(v.coarse_points(), vec![vec![0, 0], vec![0, 2], vec![2, 0]]);
        assert_eq!(v.fine_only, vec![vec![0, 1], vec![1, 0], vec![1, 1]]);
        assert_eq!(v.coarse.lattice_points(1).len(), 3);
        assert!(sublattice_view(&poly(&[&[0], &[3]]), 2).is_err());
        assert_eq!(*dilate(&poly(&[&[0], &[1]]), 2).unwrap().vertices(), vec![vec![0], vec![2]]);
    }
}

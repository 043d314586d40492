use crate::category::{augment, direct_sum, jordan_basis, DiffMorphism, DiffObject};
use crate::error::{Error, Result};
use crate::homotopy::{null_homotopy_witness, HomotopyWitness};

/// `X` with its free summands stripped.
#[derive(Clone, Debug)]
pub struct MinimalModel {
    /// Canonical form of the non-free Jordan blocks of `X`.
    pub reduced: DiffObject,
    pub include: DiffMorphism,
    pub project: DiffMorphism,
    pub free_rank: usize,
    /// Witness for `include . project ~ 1_X`.
    pub witness: HomotopyWitness,
    /// Isomorphism `X -> reduced (+) T(k^free_rank)`.
    pub splitting: DiffMorphism,
}

pub fn minimal_model(x: &DiffObject) -> Result<MinimalModel> {
    let n = x.n();
    let field = x.field();
    let jb = jordan_basis(x)?;
    let stable = jb.jordan_type.stable_part();
    let free_rank = jb.jordan_type.free_rank();
    let reduced = stable.canonical_object(field);

    let mut kept = Vec::new();
    let mut free_tops = Vec::new();
    for (off, len) in jb.chains() {
        if len == n {
            free_tops.push(off);
        } else {
            kept.extend(off..off + len);
        }
    }
    // free part in block-major order so that it matches T(k^free_rank)
    let free: Vec<usize> = (0..n).flat_map(|k| free_tops.iter().map(move |&o| o + k)).collect();

    let include = DiffMorphism::build(&reduced, x, jb.p.select_columns(&kept), "minimal include")?;
    let project = DiffMorphism::build(x, &reduced, jb.p_inv.select_rows(&kept), "minimal project")?;
    if !project.compose(&include)?.matrix().is_identity() {
        return Err(Error::Internal("project . include != 1".into()));
    }
    let ip = include.compose(&project)?;
    let witness = null_homotopy_witness(&ip.sub(&x.identity())?)?
        .ok_or_else(|| Error::Internal("include . project is not homotopic to 1".into()))?;

    let t = augment(field, free_rank, n)?;
    let target = direct_sum(&reduced, &t)?;
    let rows: Vec<usize> = kept.iter().chain(free.iter()).copied().collect();
    let splitting = DiffMorphism::build(x, &target, jb.p_inv.select_rows(&rows), "free splitting")?;
    Ok(MinimalModel { reduced, include, project, free_rank, witness, splitting })
}

/// Mutually inverse maps in the homotopy category.
#[derive(Clone, Debug)]
pub struct HomotopyEquivalence {
    pub f: DiffMorphism,
    pub g: DiffMorphism,
    pub gf_witness: HomotopyWitness,
    pub fg_witness: HomotopyWitness,
}

/// `X ~ Y` exactly when their Jordan types agree after deleting the parts
/// equal to `n`; the maps then go through the common minimal model.
pub fn homotopy_equivalence(x: &DiffObject, y: &DiffObject) -> Result<Option<HomotopyEquivalence>> {
    x.check_compatible(y)?;
    let mx = minimal_model(x)?;
    let my = minimal_model(y)?;
    if mx.reduced != my.reduced {
        return Ok(None);
    }
    let f = my.include.compose(&mx.project)?;
    let g = mx.include.compose(&my.project)?;
    let gf = g.compose(&f)?.sub(&x.identity())?;
    let fg = f.compose(&g)?.sub(&y.identity())?;
    let missing = || Error::Internal("minimal-model maps are not inverse up to homotopy".into());
    let gf_witness = null_homotopy_witness(&gf)?.ok_or_else(missing)?;
    let fg_witness = null_homotopy_witness(&fg)?.ok_or_else(missing)?;
    Ok(Some(HomotopyEquivalence { f, g, gf_witness, fg_witness }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::category::{jordan_block, jordan_type};
    use crate::exactla::FieldSpec;

    #[test]
    fn examples() {
        let f = FieldSpec::rationals();
        let t = augment(f, 2, 3).unwrap();
        let m = minimal_model(&t).unwrap();
        assert_eq!((m.reduced.dim(), m.free_rank), (0, 2));

        let x = direct_sum(&jordan_block(f, 2, 3).unwrap(), &jordan_block(f, 3, 3).unwrap()).unwrap();
        let m = minimal_model(&x).unwrap();
        assert_eq!(jordan_type(&m.reduced).parts(), &[2]);
        assert_eq!(m.free_rank, 1);
        assert!(m.splitting.is_iso());

        let x = direct_sum(&jordan_block(f, 2, 3).unwrap(), &jordan_block(f, 1, 3).unwrap()).unwrap();
        let m = minimal_model(&x).unwrap();
        assert_eq!(m.reduced, x);
        assert!(m.include.matrix().is_identity());
        assert!(m.project.matrix().is_identity());
    }

    #[test]
    fn equivalences() {
        let f = FieldSpec::prime(2).unwrap();
        let j1 = jordan_block(f, 1, 3).unwrap();
        let x = direct_sum(&j1, &augment(f, 1, 3).unwrap()).unwrap();
        assert!(homotopy_equivalence(&x, &j1).unwrap().is_some());
        let j2 = jordan_block(f, 2, 3).unwrap();
        assert!(homotopy_equivalence(&j2, &j1).unwrap().is_none());
    }
}

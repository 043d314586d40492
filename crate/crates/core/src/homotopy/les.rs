use super::homology::{check_r, homology, homology_map_between, HomologySpace};
use crate::category::ShortExactSeq;
use crate::error::{Error, Result};
use crate::exactla::{solve_linear, Matrix};

/// The hexagon
/// `H_r(A) -> H_r(B) -> H_r(C) -> H_(n-r)(A) -> H_(n-r)(B) -> H_(n-r)(C) -> H_r(A)`
/// of a short exact sequence, with exactness checked at all six terms.
#[derive(Clone, Debug)]
pub struct LongExactWindow {
    pub r: usize,
    /// Dimensions of the six terms, in the order above.
    pub dims: [usize; 6],
    /// `maps[k]` goes from term `k` to term `k + 1` (mod 6). `maps[2]` and
    /// `maps[5]` are the connecting maps.
    pub maps: Vec<Matrix>,
    /// `exact[k]`: image of the incoming map equals kernel of the outgoing
    /// one at term `k`.
    pub exact: [bool; 6],
}

impl LongExactWindow {
    pub fn connecting(&self) -> &Matrix {
        &self.maps[2]
    }

    pub fn is_exact(&self) -> bool {
        self.exact.iter().all(|&e| e)
    }
}

/// `H_r(C) -> H_(n-r)(A)`: lift through `p`, apply `eps_B^r`, pull back along `i`.
fn connecting(seq: &ShortExactSeq, hc: &HomologySpace, ha: &HomologySpace) -> Result<Matrix> {
    let r = hc.r;
    let chase = |c: &Matrix| -> Result<Matrix> {
        let b = solve_linear(seq.p().matrix(), c)
            .ok_or_else(|| Error::Internal("p is not surjective".into()))?;
        let eb = seq.b().eps_pow(r).mul(&b);
        let a = solve_linear(seq.i().matrix(), &eb)
            .ok_or_else(|| Error::Internal("eps^r of a lift leaves the image of i".into()))?;
        ha.class_coords(&a)
    };
    if !chase(hc.im.basis())?.is_zero() {
        return Err(Error::Internal("connecting map is not well defined".into()));
    }
    chase(&hc.quot_reps)
}

fn exact_at(dim: usize, incoming: &Matrix, outgoing: &Matrix) -> bool {
    outgoing.mul(incoming).is_zero() && incoming.rank() + outgoing.rank() == dim
}

pub fn les(seq: &ShortExactSeq, r: usize) -> Result<LongExactWindow> {
    let n = seq.a().n();
    check_r(n, r)?;
    let s = n - r;
    let ha = [homology(seq.a(), r)?, homology(seq.a(), s)?];
    let hb = [homology(seq.b(), r)?, homology(seq.b(), s)?];
    let hc = [homology(seq.c(), r)?, homology(seq.c(), s)?];
    let mut maps = Vec::with_capacity(6);
    for k in 0..2 {
        maps.push(homology_map_between(seq.i(), &ha[k], &hb[k])?);
        maps.push(homology_map_between(seq.p(), &hb[k], &hc[k])?);
        maps.push(connecting(seq, &hc[k], &ha[1 - k])?);
    }
    let dims = [ha[0].dim, hb[0].dim, hc[0].dim, ha[1].dim, hb[1].dim, hc[1].dim];
    let exact = std::array::from_fn(|k| exact_at(dims[k], &maps[(k + 5) % 6], &maps[k]));
    Ok(LongExactWindow { r, dims, maps, exact })
}

//! Decompositions of `V` into lines, the predicates describing how a map acts
//! on them, idempotent sequences, and flags.
//!
//! The boundary parts `V_{-1}`, `V_{d+1}` and `U_{-1}` are never stored; they
//! show up as `None` / the zero subspace at the call sites that need them.

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::linalg::{line_image, Line, Matrix, Subspace};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Action {
    Lowers,
    Raises,
}

/// An ordered sequence of `d + 1` lines whose sum is direct and equals `V`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Decomposition {
    field: PrimeField,
    lines: Vec<Line>,
}

impl Serialize for Decomposition {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.lines.serialize(s)
    }
}

pub fn make_decomposition(lines: Vec<Line>) -> Result<Decomposition> {
    let Some(first) = lines.first() else {
        return Err(Error::NotDirectSum);
    };
    let field = first.field();
    let n = lines.len();
    if lines.iter().any(|l| l.dim_ambient() != n || l.field() != field) {
        return Err(Error::NotDirectSum);
    }
    let spans: Vec<Vec<u64>> = lines.iter().map(|l| l.span().to_vec()).collect();
    let m = Matrix::from_columns(field, &spans)?;
    if !m.is_invertible() {
        return Err(Error::NotDirectSum);
    }
    Ok(Decomposition { field, lines })
}

impl Decomposition {
    /// The decomposition into coordinate lines `(e_0), …, (e_d)`.
    pub fn standard(field: PrimeField, d: usize) -> Decomposition {
        let lines = (0..=d).map(|i| Line::coordinate(field, d + 1, i)).collect();
        Decomposition { field, lines }
    }

    /// Builds a decomposition from arbitrary spanning vectors (normalized here).
    pub fn from_vectors(field: PrimeField, vectors: &[Vec<u64>]) -> Result<Decomposition> {
        let lines = vectors
            .iter()
            .map(|v| Line::new(field, v).map_err(|_| Error::NotDirectSum))
            .collect::<Result<Vec<_>>>()?;
        make_decomposition(lines)
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn d(&self) -> usize {
        self.lines.len() - 1
    }

    pub fn lines(&self) -> &[Line] {
        &self.lines
    }

    pub fn line(&self, i: usize) -> &Line {
        &self.lines[i]
    }

    /// `V_i` with the boundary convention: `None` outside `0..=d`.
    fn part(&self, i: isize) -> Option<&Line> {
        usize::try_from(i).ok().and_then(|i| self.lines.get(i))
    }

    /// Normalized spanning vectors as the columns of a matrix.
    pub fn spanning_matrix(&self) -> Matrix {
        let spans: Vec<Vec<u64>> = self.lines.iter().map(|l| l.span().to_vec()).collect();
        Matrix::from_columns(self.field, &spans).expect("valid decomposition")
    }

    pub fn spanning_vectors(&self) -> Vec<Vec<u64>> {
        self.lines.iter().map(|l| l.span().to_vec()).collect()
    }

    /// `{V_{d-i}}`.
    pub fn reversed(&self) -> Decomposition {
        let mut lines = self.lines.clone();
        lines.reverse();
        Decomposition { field: self.field, lines }
    }

    pub fn idempotents(&self) -> IdempotentSequence {
        idempotent_sequence(self)
    }

    pub fn induced_flag(&self) -> Flag {
        induced_flag(self)
    }
}

pub fn action_check(x: &Matrix, dec: &Decomposition, mode: Action) -> bool {
    let step: isize = match mode {
        Action::Lowers => -1,
        Action::Raises => 1,
    };
    dec.lines.iter().enumerate().all(|(i, line)| {
        let target = dec.part(i as isize + step);
        line_image(x, line).as_ref() == target
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TridiagonalReport {
    pub tridiagonal: bool,
    pub irreducible: bool,
}

/// Classifies `X` against `D` through the blocks `E_j X E_i`.
pub fn tridiagonal_check(x: &Matrix, dec: &Decomposition) -> TridiagonalReport {
    let e = dec.idempotents();
    let d = dec.d();
    let x_e: Vec<Matrix> = e.mats.iter().map(|ei| x * ei).collect();
    let block_zero = |j: usize, i: usize| (&e.mats[j] * &x_e[i]).is_zero();
    let tridiagonal = (0..=d)
        .all(|i| (0..=d).filter(|&j| i.abs_diff(j) > 1).all(|j| block_zero(j, i)));
    let irreducible = tridiagonal
        && (1..=d).all(|i| !block_zero(i - 1, i))
        && (0..d).all(|i| !block_zero(i + 1, i));
    TridiagonalReport { tridiagonal, irreducible }
}

pub fn zero_diagonal_check(x: &Matrix, dec: &Decomposition) -> bool {
    let e = dec.idempotents();
    e.mats.iter().all(|ei| (&(ei * x) * ei).is_zero())
}

/// The projections `E_i` onto `V_i` along the remaining lines.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct IdempotentSequence {
    mats: Vec<Matrix>,
}

impl IdempotentSequence {
    pub fn matrices(&self) -> &[Matrix] {
        &self.mats
    }

    pub fn get(&self, i: usize) -> &Matrix {
        &self.mats[i]
    }

    /// `E_i² = E_i`, `E_i E_j = 0` for `i ≠ j`, and `Σ E_i = I`.
    pub fn is_valid(&self) -> bool {
        let Some(first) = self.mats.first() else {
            return false;
        };
        let field = first.field();
        let n = first.n_rows();
        let zero = Matrix::zeros(field, n, n);
        let mut sum = zero.clone();
        for (i, ei) in self.mats.iter().enumerate() {
            for (j, ej) in self.mats.iter().enumerate() {
                let prod = ei * ej;
                if (i == j && &prod != ei) || (i != j && prod != zero) {
                    return false;
                }
            }
            sum = &sum + ei;
        }
        sum == Matrix::identity(field, n)
    }
}

pub fn idempotent_sequence(dec: &Decomposition) -> IdempotentSequence {
    let p = dec.spanning_matrix();
    let p_inv = p.inverse().expect("spanning vectors of a decomposition are independent");
    let n = dec.d() + 1;
    let f = dec.field;
    let mats = (0..n)
        .map(|i| {
            // E_i = (column i of P) ⊗ (row i of P^{-1}).
            let col = p.column(i);
            let row = p_inv.row(i);
            let rows = col.iter().map(|&c| row.iter().map(|&r| f.mul(c, r)).collect()).collect();
            Matrix::from_rows(f, rows).expect("square")
        })
        .collect();
    IdempotentSequence { mats }
}

/// A chain `U_0 ⊆ U_1 ⊆ … ⊆ U_d` with `dim U_i = i + 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Flag {
    subspaces: Vec<Subspace>,
}

impl Serialize for Flag {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.subspaces.serialize(s)
    }
}

impl Flag {
    pub fn new(subspaces: Vec<Subspace>) -> Result<Flag> {
        let n = subspaces.len();
        for (i, u) in subspaces.iter().enumerate() {
            if u.ambient() != n || u.dim() != i + 1 {
                return Err(Error::NotAFlag);
            }
            if i > 0 && !subspaces[i - 1].is_subspace_of(u) {
                return Err(Error::NotAFlag);
            }
        }
        if n == 0 {
            return Err(Error::NotAFlag);
        }
        Ok(Flag { subspaces })
    }

    pub fn d(&self) -> usize {
        self.subspaces.len() - 1
    }

    pub fn subspaces(&self) -> &[Subspace] {
        &self.subspaces
    }

    pub fn get(&self, i: usize) -> &Subspace {
        &self.subspaces[i]
    }
}

/// `U_i = V_0 + … + V_i`.
pub fn induced_flag(dec: &Decomposition) -> Flag {
    let n = dec.d() + 1;
    let mut acc = Subspace::zero(dec.field, n);
    let subspaces = dec
        .lines
        .iter()
        .map(|l| {
            acc = acc.sum(&l.to_subspace());
            acc.clone()
        })
        .collect();
    Flag { subspaces }
}

pub fn flag_action_check(x: &Matrix, flag: &Flag, mode: Action) -> bool {
    let d = flag.d();
    let u = &flag.subspaces;
    match mode {
        Action::Lowers => (0..=d).all(|i| {
            let image = u[i].image(x);
            if i == 0 {
                image.dim() == 0
            } else {
                image == u[i - 1]
            }
        }),
        Action::Raises => (0..d).all(|i| {
            let image = u[i].image(x);
            image.is_subspace_of(&u[i + 1]) && !image.is_subspace_of(&u[i])
        }),
    }
}

/// `U_i ∩ U'_j = 0` for every `i + j < d`.
pub fn flags_opposite(f1: &Flag, f2: &Flag) -> bool {
    let d = f1.d();
    if f2.d() != d {
        return false;
    }
    (0..d).all(|i| (0..d - i).all(|j| f1.get(i).intersect(f2.get(j)).dim() == 0))
}

/// The same predicate checked only on the maximal pairs `i + j = d - 1`;
/// smaller pairs follow by inclusion.
pub fn flags_opposite_minimal(f1: &Flag, f2: &Flag) -> bool {
    let d = f1.d();
    if f2.d() != d {
        return false;
    }
    (0..d).all(|i| f1.get(i).intersect(f2.get(d - 1 - i)).dim() == 0)
}

/// `Z_i = U_i ∩ U'_{d-i}` for a pair of opposite flags.
pub fn opposite_intersection_decomposition(f1: &Flag, f2: &Flag) -> Result<Decomposition> {
    if !flags_opposite(f1, f2) {
        return Err(Error::NotOpposite);
    }
    let d = f1.d();
    let lines = (0..=d)
        .map(|i| {
            f1.get(i).intersect(f2.get(d - i)).as_line().ok_or_else(|| {
                Error::InternalContradiction(format!("Z_{i} of opposite flags is not a line"))
            })
        })
        .collect::<Result<Vec<_>>>()?;
    make_decomposition(lines).map_err(|_| {
        Error::InternalContradiction("intersections of opposite flags are not direct".into())
    })
}

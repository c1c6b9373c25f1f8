//! Default anchor configurations, their incidence checks, and the membership
//! predicate of every kind.

use std::collections::BTreeMap;

use super::{ConstructionSpec, Kind};
use crate::error::{Error, Result};
use crate::qspace::{Ambient, Subspace};

/// Named anchor subspaces of one construction.
pub type Anchors = BTreeMap<String, Subspace>;

pub(crate) type Predicate = Box<dyn Fn(&Subspace) -> bool + Send + Sync>;

fn cols(a: Ambient, c: impl IntoIterator<Item = usize>) -> Subspace {
    a.coordinate_span(&c.into_iter().collect::<Vec<_>>())
}

/// Span of vectors given as sparse (column, field element) lists.
fn sparse(a: Ambient, vecs: &[&[(usize, u8)]]) -> Subspace {
    let rows: Vec<Vec<u8>> = vecs
        .iter()
        .map(|v| {
            let mut row = vec![0u8; a.n()];
            for &(c, x) in v.iter() {
                row[c] = x;
            }
            row
        })
        .collect();
    a.span(&rows).expect("anchor rows are in range")
}

/// The two rulings of the hyperbolic quadric x₀x₃ = x₁x₂ on columns
/// `off..off+4`, via the Segre map (u, v) ↦ (u₀v₀, u₀v₁, u₁v₀, u₁v₁).
fn reguli(a: Ambient, off: usize) -> (Vec<Subspace>, Vec<Subspace>) {
    let q = a.q();
    let mut points: Vec<(u8, u8)> = (0..q).map(|c| (1, c)).collect();
    points.push((0, 1));
    let ruling = |first: bool| -> Vec<Subspace> {
        points
            .iter()
            .map(|&(u0, u1)| {
                let (r0, r1): (Vec<(usize, u8)>, Vec<(usize, u8)>) = if first {
                    (vec![(off, u0), (off + 2, u1)], vec![(off + 1, u0), (off + 3, u1)])
                } else {
                    (vec![(off, u0), (off + 1, u1)], vec![(off + 2, u0), (off + 3, u1)])
                };
                sparse(a, &[&r0, &r1])
            })
            .collect()
    };
    (ruling(true), ruling(false))
}

pub fn default_anchors(spec: &ConstructionSpec) -> Result<Anchors> {
    spec.validate()?;
    let a = spec.ambient()?;
    let (k, t) = (spec.k, spec.t);
    let mut m = Anchors::new();
    let mut put = |name: &str, s: Subspace| {
        m.insert(name.to_string(), s);
    };
    match spec.kind {
        Kind::Star => put("C", cols(a, 0..t)),
        Kind::G(i) | Kind::GDelta(i) | Kind::GGamma(i) => {
            put("X", cols(a, [0]));
            put("Y", cols(a, 1..=i));
        }
        Kind::K(i) => put("W", cols(a, 0..t + 2 * i)),
        Kind::HiltonMilner => {
            put("X", cols(a, [0]));
            put("Y", cols(a, 1..=k));
        }
        Kind::Line(1) => put("P", cols(a, [0])),
        Kind::Line(_) => put("Z", cols(a, 0..3)),
        Kind::Plane(j) => match j {
            1 => put("P", cols(a, [0])),
            2 => {
                put("P", cols(a, [0]));
                put("Y", cols(a, 1..4));
            }
            3 => put("X", cols(a, 0..3)),
            4 => {
                put("P", cols(a, [0]));
                put("X", cols(a, 0..3));
                put("Y", cols(a, 0..5));
            }
            5 => {
                put("L", cols(a, 0..2));
                put("Y", cols(a, 0..5));
            }
            6 => {
                put("P1", cols(a, [0]));
                put("P2", cols(a, [1]));
                put("L", cols(a, 0..2));
                put("X1", cols(a, [0, 1, 2]));
                put("X2", cols(a, [0, 1, 3]));
                put("Y", cols(a, 0..4));
                put("Z1", cols(a, [0, 1, 2, 3, 4]));
                put("Z2", cols(a, [0, 1, 2, 3, 5]));
            }
            7 => {
                put("L", cols(a, 0..2));
                put("P1", cols(a, [0]));
                put("P2", cols(a, [1]));
                put("P3", sparse(a, &[&[(0, 1), (1, 1)]]));
                put("X", cols(a, 2..5));
                put("Q1", cols(a, [2]));
                put("Q2", cols(a, [3]));
                put("Q3", cols(a, [4]));
                put("Q4", sparse(a, &[&[(2, 1), (3, 1), (4, 1)]]));
                put("Y", cols(a, 0..5));
            }
            8 => {
                put("L", cols(a, 0..2));
                put("P1", cols(a, [0]));
                put("P2", cols(a, [1]));
                put("X1", cols(a, 0..4));
                put("X2", cols(a, [0, 1, 4, 5]));
            }
            9 => {
                put("L", cols(a, 0..2));
                put("P1", cols(a, [0]));
                put("P2", cols(a, [1]));
                put("X", cols(a, 2..6));
                let (r, s) = reguli(a, 2);
                for (idx, x) in r.into_iter().enumerate() {
                    put(&format!("R{}", idx + 1), x);
                }
                for (idx, x) in s.into_iter().enumerate() {
                    put(&format!("S{}", idx + 1), x);
                }
            }
            10 => put("X", cols(a, 0..5)),
            _ => {
                put("X", cols(a, 0..4));
                put("L1", cols(a, 0..2));
                put("L2", cols(a, 2..4));
                put("Y1", cols(a, 0..5));
                put("Y2", cols(a, [0, 1, 2, 3, 5]));
            }
        },
    }
    validate_anchors(spec, &m)?;
    Ok(m)
}

fn get<'a>(m: &'a Anchors, name: &str) -> Result<&'a Subspace> {
    m.get(name)
        .ok_or_else(|| Error::InvalidAnchors(format!("missing anchor {name}")))
}

/// Anchors with the given names, in order.
fn many(m: &Anchors, names: &[&str]) -> Result<Vec<Subspace>> {
    names.iter().map(|n| get(m, n).cloned()).collect()
}

fn regulus(m: &Anchors, prefix: &str, q: u8) -> Result<Vec<Subspace>> {
    (1..=q as usize + 1)
        .map(|idx| get(m, &format!("{prefix}{idx}")).cloned())
        .collect()
}

/// Check every incidence condition the construction states for its anchors.
pub fn validate_anchors(spec: &ConstructionSpec, m: &Anchors) -> Result<()> {
    let a = spec.ambient()?;
    if m.values().any(|s| s.ambient() != a) {
        return Err(Error::AmbientMismatch);
    }
    let mut claims: Vec<(String, bool)> = Vec::new();
    let mut dims = |m: &Anchors, spec: &[(&str, usize)]| -> Result<()> {
        for &(name, d) in spec {
            let s = get(m, name)?;
            claims.push((format!("dim {name} = {d}"), s.dim() == d));
        }
        Ok(())
    };
    let (k, t, q) = (spec.k, spec.t, a.q());
    match spec.kind {
        Kind::Star => dims(m, &[("C", t)])?,
        Kind::G(i) | Kind::GDelta(i) | Kind::GGamma(i) => dims(m, &[("X", 1), ("Y", i)])?,
        Kind::K(i) => dims(m, &[("W", t + 2 * i)])?,
        Kind::HiltonMilner => dims(m, &[("X", 1), ("Y", k)])?,
        Kind::Line(1) => dims(m, &[("P", 1)])?,
        Kind::Line(_) => dims(m, &[("Z", 3)])?,
        Kind::Plane(j) => match j {
            1 => dims(m, &[("P", 1)])?,
            2 => dims(m, &[("P", 1), ("Y", 3)])?,
            3 => dims(m, &[("X", 3)])?,
            4 => dims(m, &[("P", 1), ("X", 3), ("Y", 5)])?,
            5 => dims(m, &[("L", 2), ("Y", 5)])?,
            6 => dims(
                m,
                &[
                    ("P1", 1),
                    ("P2", 1),
                    ("L", 2),
                    ("X1", 3),
                    ("X2", 3),
                    ("Y", 4),
                    ("Z1", 5),
                    ("Z2", 5),
                ],
            )?,
            7 => dims(
                m,
                &[
                    ("L", 2),
                    ("P1", 1),
                    ("P2", 1),
                    ("P3", 1),
                    ("X", 3),
                    ("Q1", 1),
                    ("Q2", 1),
                    ("Q3", 1),
                    ("Q4", 1),
                    ("Y", 5),
                ],
            )?,
            8 => dims(m, &[("L", 2), ("P1", 1), ("P2", 1), ("X1", 4), ("X2", 4)])?,
            9 => {
                dims(m, &[("L", 2), ("P1", 1), ("P2", 1), ("X", 4)])?;
                for idx in 1..=q as usize + 1 {
                    let (r, s) = (format!("R{idx}"), format!("S{idx}"));
                    dims(m, &[(r.as_str(), 2), (s.as_str(), 2)])?;
                }
            }
            10 => dims(m, &[("X", 5)])?,
            _ => dims(m, &[("L1", 2), ("L2", 2), ("X", 4), ("Y1", 5), ("Y2", 5)])?,
        },
    }
    let mut claim = |what: &str, ok: bool| claims.push((what.to_string(), ok));
    match spec.kind {
        Kind::G(_) | Kind::GDelta(_) | Kind::GGamma(_) | Kind::HiltonMilner => {
            claim("X ∩ Y = 0", get(m, "X")?.meet_dim(get(m, "Y")?) == 0);
        }
        Kind::Plane(2) => claim("P ∩ Y = 0", get(m, "P")?.meet_dim(get(m, "Y")?) == 0),
        Kind::Plane(4) => {
            let v = many(m, &["P", "X", "Y"])?;
            claim("P ⊂ X ⊂ Y", v[1].contains(&v[0]) && v[2].contains(&v[1]));
        }
        Kind::Plane(5) => claim("L ⊂ Y", get(m, "Y")?.contains(get(m, "L")?)),
        Kind::Plane(6) => {
            let v = many(m, &["P1", "P2", "L", "X1", "X2", "Y", "Z1", "Z2"])?;
            claim("P1 ≠ P2", v[0] != v[1]);
            claim("P1, P2 ⊂ L", v[2].contains(&v[0]) && v[2].contains(&v[1]));
            claim("L = X1 ∩ X2", v[3].meet(&v[4]) == v[2]);
            claim("X1, X2 ⊂ Y", v[5].contains(&v[3]) && v[5].contains(&v[4]));
            claim("Y = Z1 ∩ Z2", v[6].meet(&v[7]) == v[5]);
        }
        Kind::Plane(7) => {
            let v = many(m, &["L", "X", "Y", "P1", "P2", "P3", "Q1", "Q2", "Q3", "Q4"])?;
            claim("L, X ⊂ Y", v[2].contains(&v[0]) && v[2].contains(&v[1]));
            claim("L ∩ X = 0", v[0].meet_dim(&v[1]) == 0);
            let ps = &v[3..6];
            claim("P1, P2, P3 distinct", ps[0] != ps[1] && ps[0] != ps[2] && ps[1] != ps[2]);
            claim("P1, P2, P3 ⊂ L", ps.iter().all(|p| v[0].contains(p)));
            let qs = &v[6..10];
            claim("Q1..Q4 ⊂ X", qs.iter().all(|p| v[1].contains(p)));
            let frame = (0..4).all(|skip| {
                let three: Vec<&Subspace> = (0..4).filter(|&j| j != skip).map(|j| &qs[j]).collect();
                three[0].join(three[1]).join(three[2]) == v[1]
            });
            claim("any three of Q1..Q4 span X", frame);
        }
        Kind::Plane(8) => {
            let v = many(m, &["L", "P1", "P2", "X1", "X2"])?;
            claim("P1 ≠ P2", v[1] != v[2]);
            claim("P1, P2 ⊂ L", v[0].contains(&v[1]) && v[0].contains(&v[2]));
            claim("L = X1 ∩ X2", v[3].meet(&v[4]) == v[0]);
        }
        Kind::Plane(9) => {
            let v = many(m, &["L", "P1", "P2", "X"])?;
            claim("L ∩ X = 0", v[0].meet_dim(&v[3]) == 0);
            claim("P1 ≠ P2", v[1] != v[2]);
            claim("P1, P2 ⊂ L", v[0].contains(&v[1]) && v[0].contains(&v[2]));
            let r = regulus(m, "R", q)?;
            let s = regulus(m, "S", q)?;
            claim("R, S lines inside X", r.iter().chain(&s).all(|l| v[3].contains(l)));
            let skew = |ls: &[Subspace]| {
                (0..ls.len()).all(|x| (x + 1..ls.len()).all(|y| ls[x].meet_dim(&ls[y]) == 0))
            };
            claim("R pairwise disjoint", skew(&r));
            claim("S pairwise disjoint", skew(&s));
            claim(
                "every R meets every S in a point",
                r.iter().all(|x| s.iter().all(|y| x.meet_dim(y) == 1)),
            );
        }
        Kind::Plane(11) => {
            let v = many(m, &["L1", "L2", "X", "Y1", "Y2"])?;
            claim("L1, L2 ⊂ X", v[2].contains(&v[0]) && v[2].contains(&v[1]));
            claim("X = Y1 ∩ Y2", v[3].meet(&v[4]) == v[2]);
            claim("L1 ∩ L2 = 0", v[0].meet_dim(&v[1]) == 0);
        }
        _ => {}
    }
    match claims.into_iter().find(|(_, ok)| !ok) {
        Some((what, _)) => Err(Error::InvalidAnchors(format!("{}: {what} fails", spec.kind))),
        None => Ok(()),
    }
}

/// Membership test for `spec` over validated anchors.
pub(crate) fn predicate(spec: &ConstructionSpec, m: &Anchors) -> Result<Predicate> {
    let q = spec.q;
    let p: Predicate = match spec.kind {
        Kind::Star => {
            let c = get(m, "C")?.clone();
            Box::new(move |f| f.contains(&c))
        }
        Kind::G(_) => {
            let (x, y) = (get(m, "X")?.clone(), get(m, "Y")?.clone());
            Box::new(move |f| {
                (f.contains(&x) && f.meet_dim(&y) >= 1) || f.join(&x).contains(&y)
            })
        }
        Kind::GDelta(_) => {
            let (x, y) = (get(m, "X")?.clone(), get(m, "Y")?.clone());
            Box::new(move |f| f.contains(&x) && f.meet_dim(&y) >= 1)
        }
        Kind::GGamma(_) => {
            let (x, y) = (get(m, "X")?.clone(), get(m, "Y")?.clone());
            Box::new(move |f| f.meet_dim(&x) == 0 && f.join(&x).contains(&y))
        }
        Kind::K(i) => {
            let w = get(m, "W")?.clone();
            let need = spec.t + i;
            Box::new(move |f| f.meet_dim(&w) >= need)
        }
        Kind::HiltonMilner => {
            let (x, y) = (get(m, "X")?.clone(), get(m, "Y")?.clone());
            let xy = x.join(&y);
            Box::new(move |f| (f.contains(&x) && f.meet_dim(&y) >= 1) || xy.contains(f))
        }
        Kind::Line(1) | Kind::Plane(1) => {
            let pt = get(m, "P")?.clone();
            Box::new(move |f| f.contains(&pt))
        }
        Kind::Line(_) => {
            let z = get(m, "Z")?.clone();
            Box::new(move |f| z.contains(f))
        }
        Kind::Plane(2) => {
            let (pt, y) = (get(m, "P")?.clone(), get(m, "Y")?.clone());
            Box::new(move |f| {
                (f.contains(&pt) && f.meet_dim(&y) >= 1) || pt.join(f).contains(&y)
            })
        }
        Kind::Plane(3) => {
            let x = get(m, "X")?.clone();
            Box::new(move |f| f.meet_dim(&x) >= 2)
        }
        Kind::Plane(4) => {
            let v = many(m, &["P", "X", "Y"])?;
            Box::new(move |f| {
                let (hp, hy, mx) = (f.contains(&v[0]), v[2].contains(f), f.meet_dim(&v[1]));
                (hp && hy) || (hp && mx == 2) || (hy && mx == 2)
            })
        }
        Kind::Plane(5) => {
            let v = many(m, &["L", "Y"])?;
            Box::new(move |f| f.contains(&v[0]) || (v[1].contains(f) && f.meet_dim(&v[0]) == 1))
        }
        Kind::Plane(6) => {
            let v = many(m, &["P1", "P2", "L", "X1", "X2", "Y", "Z1", "Z2"])?;
            Box::new(move |f| {
                if f.contains(&v[2]) || v[5].contains(f) {
                    return true;
                }
                let (p, x, z) = (&v[0..2], &v[3..5], &v[6..8]);
                (0..2).any(|i| {
                    f.contains(&p[i])
                        && ((z[0].contains(f) && f.meet_dim(&x[i]) >= 2)
                            || (z[1].contains(f) && f.meet_dim(&x[1 - i]) >= 2))
                })
            })
        }
        Kind::Plane(7) => {
            let v = many(m, &["L", "P1", "P2", "P3", "Q1", "Q2", "Q3", "Q4"])?;
            let l = v[0].clone();
            let pair = |a: usize, b: usize| l.join(&v[4 + a]).join(&v[4 + b]);
            // (Pᵢ, L + Lᵢ) and (Pᵢ, L + L̄ᵢ) for i = 1, 2, 3.
            let flags: Vec<(Subspace, Subspace)> = vec![
                (v[1].clone(), pair(0, 1)),
                (v[1].clone(), pair(2, 3)),
                (v[2].clone(), pair(0, 2)),
                (v[2].clone(), pair(1, 3)),
                (v[3].clone(), pair(0, 3)),
                (v[3].clone(), pair(1, 2)),
            ];
            Box::new(move |f| {
                f.contains(&l) || flags.iter().any(|(p, s)| f.contains(p) && s.contains(f))
            })
        }
        Kind::Plane(8) => {
            let v = many(m, &["L", "P1", "P2", "X1", "X2"])?;
            Box::new(move |f| {
                f.contains(&v[0])
                    || (f.contains(&v[1]) && f.meet_dim(&v[3]) >= 2 && f.meet_dim(&v[4]) >= 2)
                    || (f.contains(&v[2]) && (v[3].contains(f) || v[4].contains(f)))
            })
        }
        Kind::Plane(9) => {
            let v = many(m, &["L", "P1", "P2"])?;
            let l = v[0].clone();
            let lr: Vec<Subspace> = regulus(m, "R", q)?.iter().map(|r| l.join(r)).collect();
            let ls: Vec<Subspace> = regulus(m, "S", q)?.iter().map(|s| l.join(s)).collect();
            let (p1, p2) = (v[1].clone(), v[2].clone());
            Box::new(move |f| {
                f.contains(&l)
                    || (f.contains(&p1) && lr.iter().any(|s| s.contains(f)))
                    || (f.contains(&p2) && ls.iter().any(|s| s.contains(f)))
            })
        }
        Kind::Plane(10) => {
            let x = get(m, "X")?.clone();
            Box::new(move |f| x.contains(f))
        }
        Kind::Plane(_) => {
            let v = many(m, &["L1", "L2", "X", "Y1", "Y2"])?;
            Box::new(move |f| {
                v[2].contains(f)
                    || ((f.contains(&v[0]) || f.contains(&v[1])) && v[3].contains(f))
                    || (v[4].contains(f) && f.meet_dim(&v[0]) >= 1 && f.meet_dim(&v[1]) >= 1)
            })
        }
    };
    Ok(p)
}

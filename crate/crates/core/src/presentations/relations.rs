use crate::exact::Scalar;

use super::{Generator, Lin};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Presentation {
    /// Commuting generators y_i.
    Lusztig,
    /// W-equivariant shifted generators ỹ_i.
    Drinfeld,
}

/// Parameters; the variant selects the algebra.
#[derive(Clone, Debug, PartialEq)]
pub enum Params<S> {
    Daha { kappa1: S, kappa2: S },
    Ddaha { t: S, k1: S, k2: S, k3: S },
}

impl<S: Scalar> Params<S> {
    /// Parameters of the dAHA generated by W and the y_i (κ₁ = k₁, κ₂ = k₂ + k₃).
    pub fn kappa(&self) -> (S, S) {
        match self {
            Params::Daha { kappa1, kappa2 } => (kappa1.clone(), kappa2.clone()),
            Params::Ddaha { k1, k2, k3, .. } => (k1.clone(), k2.plus(k3)),
        }
    }

    pub fn is_double(&self) -> bool {
        matches!(self, Params::Ddaha { .. })
    }

    pub fn algebra_tag(&self) -> &'static str {
        if self.is_double() {
            "dDAHA"
        } else {
            "dAHA"
        }
    }

    pub fn entries(&self) -> Vec<(&'static str, S)> {
        match self {
            Params::Daha { kappa1, kappa2 } => vec![("kappa1", kappa1.clone()), ("kappa2", kappa2.clone())],
            Params::Ddaha { t, k1, k2, k3 } => vec![
                ("t", t.clone()),
                ("k1", k1.clone()),
                ("k2", k2.clone()),
                ("k3", k3.clone()),
            ],
        }
    }
}

/// Relation `lin = 0`, one index instance per expression.
#[derive(Clone, Debug, PartialEq)]
pub struct RelationExpression<S> {
    pub name: String,
    pub lin: Lin<S>,
}

struct Builder<S> {
    prefix: String,
    out: Vec<RelationExpression<S>>,
}

impl<S: Scalar> Builder<S> {
    fn push(&mut self, name: String, lin: Lin<S>) {
        self.out.push(RelationExpression {
            name: format!("{}.{}", self.prefix, name),
            lin,
        });
    }
}

fn c<S: Scalar>(v: i64) -> S {
    S::from_i64(v)
}

fn half<S: Scalar>(x: &S) -> S {
    x.divide(&c(2)).expect("2 is invertible")
}

fn quarter<S: Scalar>(x: &S) -> S {
    x.divide(&c(4)).expect("4 is invertible")
}

fn sw<S: Scalar>(i: usize, j: usize) -> Lin<S> {
    Lin::g(Generator::s(i, j))
}

fn gm<S: Scalar>(i: usize) -> Lin<S> {
    Lin::g(Generator::Gamma(i))
}

fn xg<S: Scalar>(i: usize) -> Lin<S> {
    Lin::g(Generator::X(i))
}

fn xi<S: Scalar>(i: usize) -> Lin<S> {
    Lin::g(Generator::XInv(i))
}

fn e<S: Scalar>() -> Lin<S> {
    Lin::identity()
}

fn pow<S: Scalar>(a: &Lin<S>, k: usize) -> Lin<S> {
    (0..k).fold(e(), |acc, _| acc.times(a))
}

/// Coxeter relations of type B_n in S_1..S_{n−1}, γ_n, plus the relations
/// that define the remaining reflections γ_i and S_ij as elements of W.
fn weyl_relations<S: Scalar>(b: &mut Builder<S>, n: usize) {
    let s = |i: usize| sw::<S>(i, i + 1);
    let gn = gm::<S>(n - 1);
    for i in 0..n.saturating_sub(1) {
        b.push(format!("cox.S^2.i={}", i + 1), s(i).times(&s(i)).minus(&e()));
    }
    b.push(format!("cox.g^2.i={n}"), gn.times(&gn).minus(&e()));
    for i in 0..n.saturating_sub(2) {
        b.push(
            format!("cox.(SS)^3.i={}", i + 1),
            pow(&s(i).times(&s(i + 1)), 3).minus(&e()),
        );
    }
    for i in 0..n.saturating_sub(1) {
        for j in i + 2..n.saturating_sub(1) {
            b.push(
                format!("cox.SS=SS.i={},j={}", i + 1, j + 1),
                Lin::commutator(&s(i), &s(j)),
            );
        }
    }
    for i in 0..n.saturating_sub(2) {
        b.push(format!("cox.Sg=gS.i={}", i + 1), Lin::commutator(&s(i), &gn));
    }
    if n >= 2 {
        b.push("cox.(Sg)^4".to_string(), pow(&s(n - 2).times(&gn), 4).minus(&e()));
    }
    for i in 0..n.saturating_sub(1) {
        b.push(
            format!("wdef.gamma.i={}", i + 1),
            gm::<S>(i).minus(&s(i).times(&gm(i + 1)).times(&s(i))),
        );
    }
    for i in 0..n {
        for j in i + 2..n {
            b.push(
                format!("wdef.S.i={},j={}", i + 1, j + 1),
                sw::<S>(i, j).minus(&s(j - 1).times(&sw(i, j - 1)).times(&s(j - 1))),
            );
        }
    }
}

/// Relations among W and the X_i that both dDAHA presentations share.
/// Labels follow the Lusztig list (ii, iv, v); the Drinfeld list groups
/// them all under i.
fn x_relations<S: Scalar>(b: &mut Builder<S>, n: usize, presentation: Presentation) {
    let (sx, gx, xx) = match presentation {
        Presentation::Lusztig => ("ii", "iv", "v"),
        Presentation::Drinfeld => ("i", "i", "i"),
    };
    let s = |i: usize| sw::<S>(i, i + 1);
    for i in 0..n {
        b.push(format!("xinv.r.i={}", i + 1), xg::<S>(i).times(&xi(i)).minus(&e()));
        b.push(format!("xinv.l.i={}", i + 1), xi::<S>(i).times(&xg(i)).minus(&e()));
    }
    for i in 0..n.saturating_sub(1) {
        b.push(
            format!("{sx}.SX.i={}", i + 1),
            s(i).times(&xg(i)).minus(&xg::<S>(i + 1).times(&s(i))),
        );
        for j in 0..n {
            if j != i && j != i + 1 {
                b.push(
                    format!("{sx}.[S,X].i={},j={}", i + 1, j + 1),
                    Lin::commutator(&s(i), &xg(j)),
                );
            }
        }
    }
    let gn = gm::<S>(n - 1);
    b.push(
        format!("{gx}.gX=Xig.i={n}"),
        gn.times(&xg(n - 1)).minus(&xi::<S>(n - 1).times(&gn)),
    );
    for j in 0..n - 1 {
        b.push(format!("{gx}.[g,X].j={}", j + 1), Lin::commutator(&gn, &xg(j)));
    }
    for i in 0..n {
        for j in i + 1..n {
            b.push(
                format!("{xx}.[X,X].i={},j={}", i + 1, j + 1),
                Lin::commutator(&xg(i), &xg(j)),
            );
        }
    }
}

/// Right side of the [ỹ_i, ỹ_j] relation with κ₁, κ₂.
fn ytilde_commutator_rhs<S: Scalar>(n: usize, i: usize, j: usize, k1: &S, k2: &S) -> Lin<S> {
    let g = gm::<S>;
    let gg = |a: usize, b: usize| g(a).times(&g(b));
    let mut rhs = sw::<S>(i, j)
        .times(&g(j).minus(&g(i)))
        .scaled(&half(&k1.times(k2)));
    let q = quarter(&k1.times(k1));
    for k in (0..n).filter(|&k| k != i && k != j) {
        let sjk_sik = sw::<S>(j, k).times(&sw(i, k));
        let sik_sjk = sw::<S>(i, k).times(&sw(j, k));
        let a = gg(i, k).negated().plus(&gg(i, j)).plus(&gg(j, k));
        let bb = gg(i, j).minus(&gg(j, k)).plus(&gg(i, k));
        let sum = sjk_sik
            .minus(&sik_sjk)
            .plus(&sik_sjk.times(&a))
            .minus(&sjk_sik.times(&bb));
        rhs = rhs.plus(&sum.scaled(&q));
    }
    rhs
}

/// Every relation instance of the requested presentation, expanded over all
/// index values (sums over k ≠ i, j are empty when n ≤ 2).
pub fn relation_set<S: Scalar>(
    presentation: Presentation,
    n: usize,
    params: &Params<S>,
) -> Vec<RelationExpression<S>> {
    assert!(n >= 1, "rank must be positive");
    let letter = match presentation {
        Presentation::Lusztig => "L",
        Presentation::Drinfeld => "D",
    };
    let mut b = Builder {
        prefix: format!("{}-{}", params.algebra_tag(), letter),
        out: Vec::new(),
    };
    weyl_relations(&mut b, n);
    if params.is_double() {
        x_relations(&mut b, n, presentation);
    }
    let s = |i: usize| sw::<S>(i, i + 1);
    let gn = gm::<S>(n - 1);
    let (k1, kap2) = params.kappa();
    match presentation {
        Presentation::Lusztig => {
            let y = |i: usize| Lin::<S>::g(Generator::Y(i));
            let (ii, iii, iv) = if params.is_double() {
                ("iii", "iv", "v")
            } else {
                ("ii", "iii", "iv")
            };
            for i in 0..n.saturating_sub(1) {
                b.push(
                    format!("{ii}.Sy.i={}", i + 1),
                    s(i)
                        .times(&y(i))
                        .minus(&y(i + 1).times(&s(i)))
                        .minus(&e::<S>().scaled(&k1)),
                );
                for j in (0..n).filter(|&j| j != i && j != i + 1) {
                    b.push(
                        format!("{ii}.[S,y].i={},j={}", i + 1, j + 1),
                        Lin::commutator(&s(i), &y(j)),
                    );
                }
            }
            b.push(
                format!("{iii}.gy+yg.i={n}"),
                Lin::anticommutator(&gn, &y(n - 1)).minus(&e::<S>().scaled(&kap2)),
            );
            for j in 0..n - 1 {
                b.push(format!("{iii}.[g,y].j={}", j + 1), Lin::commutator(&gn, &y(j)));
            }
            for i in 0..n {
                for j in i + 1..n {
                    b.push(
                        format!("{iv}.[y,y].i={},j={}", i + 1, j + 1),
                        Lin::commutator(&y(i), &y(j)),
                    );
                }
            }
            if let Params::Ddaha { t, k2, k3, .. } = params {
                for i in 0..n {
                    for j in i + 1..n {
                        let sij = sw::<S>(i, j);
                        let gij = gm::<S>(i).times(&gm(j));
                        let rhs1 = xg::<S>(i)
                            .times(&sij)
                            .minus(&xg::<S>(i).times(&sij).times(&gij))
                            .scaled(&k1);
                        b.push(
                            format!("vi.[y_j,X_i].i={},j={}", i + 1, j + 1),
                            Lin::commutator(&y(j), &xg(i)).minus(&rhs1),
                        );
                        let rhs2 = xg::<S>(i)
                            .times(&sij)
                            .minus(&xg::<S>(j).times(&sij).times(&gij))
                            .scaled(&k1);
                        b.push(
                            format!("vi.[y_i,X_j].i={},j={}", i + 1, j + 1),
                            Lin::commutator(&y(i), &xg(j)).minus(&rhs2),
                        );
                    }
                }
                for i in 0..n {
                    let xi_ = xg::<S>(i);
                    let mut rhs = xi_.scaled(t);
                    for k in i + 1..n {
                        rhs = rhs.minus(&xi_.times(&sw(i, k)).scaled(&k1));
                    }
                    for k in 0..i {
                        rhs = rhs.minus(&sw::<S>(i, k).times(&xi_).scaled(&k1));
                    }
                    for k in (0..n).filter(|&k| k != i) {
                        rhs = rhs.minus(
                            &xi_.times(&sw(i, k))
                                .times(&gm(i))
                                .times(&gm(k))
                                .scaled(&k1),
                        );
                    }
                    rhs = rhs
                        .minus(&xi_.times(&gm(i)).scaled(&k2.plus(k3)))
                        .minus(&gm::<S>(i).scaled(k2));
                    b.push(
                        format!("vii.[y,X].i={}", i + 1),
                        Lin::commutator(&y(i), &xi_).minus(&rhs),
                    );
                }
            }
        }
        Presentation::Drinfeld => {
            let yt = |i: usize| Lin::<S>::g(Generator::YTilde(i));
            let (first, second, third) = if params.is_double() {
                ("ii", "iii", "vi")
            } else {
                ("i", "ii", "iii")
            };
            for i in 0..n.saturating_sub(1) {
                b.push(
                    format!("{first}.Syt.i={}", i + 1),
                    s(i).times(&yt(i)).minus(&yt(i + 1).times(&s(i))),
                );
            }
            for j in 0..n.saturating_sub(1) {
                for i in (0..n).filter(|&i| i != j && i != j + 1) {
                    b.push(
                        format!("{first}.[S_j,yt_i].i={},j={}", i + 1, j + 1),
                        Lin::commutator(&s(j), &yt(i)),
                    );
                }
            }
            b.push(
                format!("{second}.yg+gy.i={n}"),
                Lin::anticommutator(&yt(n - 1), &gn),
            );
            for i in 0..n - 1 {
                b.push(
                    format!("{second}.[yt,g].i={}", i + 1),
                    Lin::commutator(&yt(i), &gn),
                );
            }
            for i in 0..n {
                for j in (0..n).filter(|&j| j != i) {
                    b.push(
                        format!("{third}.[yt,yt].i={},j={}", i + 1, j + 1),
                        Lin::commutator(&yt(i), &yt(j))
                            .minus(&ytilde_commutator_rhs(n, i, j, &k1, &kap2)),
                    );
                }
            }
            if let Params::Ddaha { t, k2, k3, .. } = params {
                let hk1 = half(&k1);
                for i in 0..n {
                    for j in (0..n).filter(|&j| j != i) {
                        let sij = sw::<S>(i, j);
                        let rhs = xg::<S>(i)
                            .plus(&xg(j))
                            .times(&sij)
                            .minus(&xg::<S>(i).plus(&xi(j)).times(&sij).times(&gm(i)).times(&gm(j)))
                            .scaled(&hk1);
                        b.push(
                            format!("iv.[yt_j,X_i].i={},j={}", i + 1, j + 1),
                            Lin::commutator(&yt(j), &xg(i)).minus(&rhs),
                        );
                    }
                }
                for i in 0..n {
                    let mut rhs = xg::<S>(i)
                        .scaled(t)
                        .minus(&xi::<S>(i).plus(&xg(i)).times(&gm(i)).scaled(&half(&k2.plus(k3))))
                        .minus(&gm::<S>(i).scaled(k2));
                    for k in (0..n).filter(|&k| k != i) {
                        let sik = sw::<S>(i, k);
                        let term = xg::<S>(i)
                            .plus(&xg(k))
                            .times(&sik)
                            .plus(&xg::<S>(i).plus(&xi(k)).times(&sik).times(&gm(i)).times(&gm(k)));
                        rhs = rhs.minus(&term.scaled(&hk1));
                    }
                    b.push(
                        format!("v.[yt,X].i={}", i + 1),
                        Lin::commutator(&yt(i), &xg(i)).minus(&rhs),
                    );
                }
            }
        }
    }
    b.out
}

/// ỹ_i expressed through y_i and W:
/// ỹ_i = y_i − (κ₂/2)γ_i − (κ₁/2)Σ_{k>i}S_ik + (κ₁/2)Σ_{k<i}S_ik − (κ₁/2)Σ_{k≠i}S_ikγ_iγ_k.
pub fn shift_to_drinfeld<S: Scalar>(n: usize, params: &Params<S>) -> Vec<Lin<S>> {
    let (k1, k2) = params.kappa();
    let hk1 = half(&k1);
    (0..n)
        .map(|i| {
            let mut out = Lin::g(Generator::Y(i)).minus(&gm::<S>(i).scaled(&half(&k2)));
            for k in (0..n).filter(|&k| k != i) {
                let sik = sw::<S>(i, k);
                if k > i {
                    out = out.minus(&sik.scaled(&hk1));
                } else {
                    out = out.plus(&sik.scaled(&hk1));
                }
                out = out.minus(&sik.times(&gm(i)).times(&gm(k)).scaled(&hk1));
            }
            out
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{RatFunc, Rational};

    fn daha(k1: i64, k2: i64) -> Params<Rational> {
        Params::Daha {
            kappa1: Rational::integer(k1),
            kappa2: Rational::integer(k2),
        }
    }

    fn names<S: Scalar>(rels: &[RelationExpression<S>]) -> Vec<String> {
        rels.iter().map(|r| r.name.clone()).collect()
    }

    #[test]
    fn rank_one_lusztig_daha() {
        let rels = relation_set(Presentation::Lusztig, 1, &daha(1, 3));
        assert_eq!(names(&rels), vec!["dAHA-L.cox.g^2.i=1", "dAHA-L.iii.gy+yg.i=1"]);
        let gy = &rels[1].lin;
        let expected = Lin::anticommutator(&gm(0), &Lin::g(Generator::Y(0)))
            .minus(&Lin::identity().scaled(&Rational::integer(3)));
        assert_eq!(gy, &expected);
    }

    #[test]
    fn lusztig_daha_rank_three_count_is_frozen() {
        let rels = relation_set(Presentation::Lusztig, 3, &daha(1, 1));
        assert_eq!(rels.len(), 19);
        let core = rels.iter().filter(|r| !r.name.contains("wdef")).count();
        assert_eq!(core, 16);
        let unique: std::collections::BTreeSet<_> = names(&rels).into_iter().collect();
        assert_eq!(unique.len(), rels.len());
    }

    #[test]
    fn rank_two_drinfeld_commutator_has_no_k_sum() {
        let p = Params::Ddaha {
            t: RatFunc::symbol("t"),
            k1: RatFunc::symbol("k1"),
            k2: RatFunc::symbol("k2"),
            k3: RatFunc::symbol("k3"),
        };
        let rels = relation_set(Presentation::Drinfeld, 2, &p);
        let rel = rels
            .iter()
            .find(|r| r.name == "dDAHA-D.vi.[yt,yt].i=1,j=2")
            .unwrap();
        let coeff: RatFunc = "k1*(k2+k3)/2".parse().unwrap();
        let expected = Lin::commutator(&Lin::g(Generator::YTilde(0)), &Lin::g(Generator::YTilde(1)))
            .minus(&sw(0, 1).times(&gm(1).minus(&gm(0))).scaled(&coeff));
        assert_eq!(rel.lin, expected);
    }

    #[test]
    fn shift_in_low_rank() {
        let p = daha(2, 6);
        let one = shift_to_drinfeld(1, &p);
        assert_eq!(
            one[0],
            Lin::g(Generator::Y(0)).minus(&gm(0).scaled(&Rational::integer(3)))
        );
        let two = shift_to_drinfeld(2, &p);
        let expected = Lin::g(Generator::Y(0))
            .minus(&gm(0).scaled(&Rational::integer(3)))
            .minus(&sw(0, 1))
            .minus(&sw::<Rational>(0, 1).times(&gm(0)).times(&gm(1)));
        assert_eq!(two[0], expected);
    }

    #[test]
    fn no_out_of_range_indices() {
        for n in 1..=3 {
            for pres in [Presentation::Lusztig, Presentation::Drinfeld] {
                let p = Params::Ddaha {
                    t: Rational::one(),
                    k1: Rational::one(),
                    k2: Rational::one(),
                    k3: Rational::one(),
                };
                for r in relation_set(pres, n, &p) {
                    for g in r.lin.generators() {
                        let ok = match g {
                            Generator::Swap(i, j) => i < j && j < n,
                            Generator::Gamma(i)
                            | Generator::Y(i)
                            | Generator::YTilde(i)
                            | Generator::X(i)
                            | Generator::XInv(i) => i < n,
                            Generator::Op(..) => false,
                        };
                        assert!(ok, "{} uses {g}", r.name);
                    }
                }
            }
        }
    }
}

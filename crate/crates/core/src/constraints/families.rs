use super::{combinations, flatten, minors, Bipartition, ConstraintSet, Family};
use crate::dimension::NaiveBayesSpec;
use crate::error::{Error, Result};
use crate::net_model::{d_separated, local_markov_statements, CIStatement, NetworkSpec};
use crate::polyring::{determinant, marginal_form, Polynomial};
use crate::shape::Shape;

fn join(v: &[usize]) -> String {
    v.iter().map(usize::to_string).collect::<Vec<_>>().join(",")
}

/// 2×2 minors of the `A`-by-`B` slice matrices, one slice per joint state of
/// `C`. Observed nodes outside `A ∪ B ∪ C` are summed out.
pub fn ci_minor_ideal(net: &NetworkSpec, stmt: &CIStatement) -> Result<ConstraintSet> {
    let shape = net.observed_shape();
    let mut cs = ConstraintSet::new(Family::CiMinors, shape.clone());
    add_ci_minors(net, stmt, &mut cs)?;
    Ok(cs)
}

fn add_ci_minors(net: &NetworkSpec, stmt: &CIStatement, cs: &mut ConstraintSet) -> Result<()> {
    let observed = net.observed();
    let position = |node: usize| {
        observed
            .iter()
            .position(|&o| o == node)
            .ok_or_else(|| Error::Statement(format!("node {:?} is hidden", net.node(node).name)))
    };
    let block = |nodes: &[usize]| nodes.iter().map(|&n| position(n)).collect::<Result<Vec<_>>>();
    let (a, b, c) = (block(stmt.a())?, block(stmt.b())?, block(stmt.c())?);
    let shape = net.observed_shape();
    let sub = |ps: &[usize]| Shape::new(ps.iter().map(|&p| shape.cards()[p]).collect());
    let (sa, sb, sc) = (sub(&a), sub(&b), sub(&c));
    let statement = stmt.display(net);

    let mut pattern: Vec<Option<usize>> = vec![None; shape.ndim()];
    for cstate in sc.indices() {
        for (&p, &v) in c.iter().zip(&cstate) {
            pattern[p] = Some(v);
        }
        let mut m = Vec::with_capacity(sa.len());
        for astate in sa.indices() {
            for (&p, &v) in a.iter().zip(&astate) {
                pattern[p] = Some(v);
            }
            let mut row = Vec::with_capacity(sb.len());
            for bstate in sb.indices() {
                for (&p, &v) in b.iter().zip(&bstate) {
                    pattern[p] = Some(v);
                }
                row.push(marginal_form(&shape, &pattern)?);
            }
            m.push(row);
        }
        for (rows, cols, p) in minors(&m, 2)? {
            cs.push(
                p,
                format!(
                    "{statement} C=[{}] rows=[{}] cols=[{}]",
                    join(&cstate),
                    join(&rows),
                    join(&cols)
                ),
            )?;
        }
    }
    Ok(())
}

/// 3×3 minors of every flattening of a naive Bayes table with two classes.
pub fn nb2_flattening_constraints(nb: &NaiveBayesSpec) -> Result<ConstraintSet> {
    if nb.classes() != 2 {
        return Err(Error::NaiveBayes(format!(
            "flattening constraints need 2 classes, got {}",
            nb.classes()
        )));
    }
    let n = nb.features().len();
    let shape = Shape::new(nb.features().to_vec());
    let mut cs = ConstraintSet::new(Family::Nb2Flattening, shape.clone());
    for bp in Bipartition::all(n) {
        let m = flatten(&shape, &bp)?;
        for (rows, cols, p) in minors(&m, 3)? {
            cs.push(
                p,
                format!(
                    "B=[{}]|[{}] rows=[{}] cols=[{}]",
                    join(bp.left()),
                    join(bp.right()),
                    join(&rows),
                    join(&cols)
                ),
            )?;
        }
    }
    Ok(cs)
}

fn check_cards(observed: [usize; 3], hidden: usize) -> Result<Shape> {
    if let Some(c) = observed.iter().chain([&hidden]).find(|&&c| c < 2) {
        return Err(Error::ShapeMismatch(format!("cardinality {c} is below 2")));
    }
    Ok(Shape::new(observed.to_vec()))
}

fn check_binary_hidden(family: Family, hidden: usize) -> Result<()> {
    if hidden != 2 {
        return Err(Error::FamilyMismatch(format!(
            "{family} needs a binary hidden node, got cardinality {hidden}"
        )));
    }
    Ok(())
}

/// `θ_{i j k +}` slice matrices: `fixed` is the observed position held at
/// `state`, rows and columns run over the other two positions in order.
fn slice(shape: &Shape, fixed: usize, state: usize) -> Vec<Vec<Polynomial>> {
    let others: Vec<usize> = (0..3).filter(|&p| p != fixed).collect();
    let mut index = [0; 3];
    index[fixed] = state;
    (0..shape.cards()[others[0]])
        .map(|i| {
            index[others[0]] = i;
            (0..shape.cards()[others[1]])
                .map(|k| {
                    index[others[1]] = k;
                    Polynomial::var(shape.linear(&index).expect("in range") as u32)
                })
                .collect()
        })
        .collect()
}

/// 2×2 minors of the `r1 × r3` matrices `(θ_{i j k +})_{i,k}`, one per `j`.
pub fn quadratic_family_constraints(observed: [usize; 3], hidden: usize) -> Result<ConstraintSet> {
    let shape = check_cards(observed, hidden)?;
    let mut cs = ConstraintSet::new(Family::Quadratic, shape.clone());
    for j in 0..observed[1] {
        for (rows, cols, p) in minors(&slice(&shape, 1, j), 2)? {
            cs.push(p, format!("j={j} rows=[{}] cols=[{}]", join(&rows), join(&cols)))?;
        }
    }
    Ok(cs)
}

/// 3×3 minors of the `r1 × r2` matrices `(θ_{i j k +})_{i,j}`, one per `k`.
pub fn cubic_family_constraints(observed: [usize; 3], hidden: usize) -> Result<ConstraintSet> {
    let shape = check_cards(observed, hidden)?;
    check_binary_hidden(Family::Cubic, hidden)?;
    let mut cs = ConstraintSet::new(Family::Cubic, shape.clone());
    for k in 0..observed[2] {
        for (rows, cols, p) in minors(&slice(&shape, 2, k), 3)? {
            cs.push(p, format!("k={k} rows=[{}] cols=[{}]", join(&rows), join(&cols)))?;
        }
    }
    Ok(cs)
}

/// One sextic per pair `j1 < j2`, built from the `2 × 3` matrices `N_j` with
/// entries `θ_{i j k +}`.
///
/// With `conjectural` set and `r1 > 2`, the same construction is applied to
/// every pair of `X1` rows and the set is flagged as conjectural; those
/// polynomials are not known to vanish on the model.
pub fn sextic_family_constraints(observed: [usize; 3], hidden: usize, conjectural: bool) -> Result<ConstraintSet> {
    let shape = check_cards(observed, hidden)?;
    check_binary_hidden(Family::Sextic, hidden)?;
    let [r1, r2, r3] = observed;
    if r3 != 3 {
        return Err(Error::FamilyMismatch(format!(
            "{} needs r3 = 3, got {r3}",
            Family::Sextic
        )));
    }
    if r1 != 2 && !conjectural {
        return Err(Error::FamilyMismatch(format!(
            "{} needs r1 = 2, got {r1}; larger r1 is only available as a conjectural set",
            Family::Sextic
        )));
    }
    let mut cs = ConstraintSet::new(Family::Sextic, shape.clone());
    if r1 > 2 {
        cs.mark_conjectural();
    }
    let slices: Vec<Vec<Vec<Polynomial>>> = (0..r2).map(|j| slice(&shape, 1, j)).collect();
    let sums: Vec<Vec<Polynomial>> = (0..r2)
        .map(|j| {
            (0..3)
                .map(|s| marginal_form(&shape, &[None, Some(j), Some(s)]))
                .collect::<Result<_>>()
        })
        .collect::<Result<_>>()?;
    for rows in combinations(r1, 2) {
        for pair in combinations(r2, 2) {
            let (j1, j2) = (pair[0], pair[1]);
            let n1: Vec<&Vec<Polynomial>> = rows.iter().map(|&i| &slices[j1][i]).collect();
            let n2: Vec<&Vec<Polynomial>> = rows.iter().map(|&i| &slices[j2][i]).collect();
            let mut total = Polynomial::zero();
            for s in 0..3 {
                let rest: Vec<usize> = (0..3).filter(|&c| c != s).collect();
                let u = determinant(
                    &n1.iter()
                        .map(|row| rest.iter().map(|&c| row[c].clone()).collect())
                        .collect::<Vec<_>>(),
                )?;
                let v = determinant(
                    &n2.iter()
                        .map(|row| vec![row[s].clone(), &row[rest[0]] * &row[rest[1]]])
                        .collect::<Vec<_>>(),
                )?;
                let term = &sums[j1][s] * &(&u * &v);
                total = if s == 1 { total - term } else { total + term };
            }
            let label = if r1 > 2 {
                format!("j1={j1} j2={j2} i1={} i2={}", rows[0], rows[1])
            } else {
                format!("j1={j1} j2={j2}")
            };
            cs.push(total, label)?;
        }
    }
    Ok(cs)
}

/// Cardinalities of a network with three observed nodes `X1, X2, X3` and one
/// hidden node `H` (in node order), after checking that the network entails
/// every statement in `required`. Statements use positions 0..3 for the
/// observed nodes and 3 for `H`.
fn triple(
    net: &NetworkSpec,
    family: Family,
    required: &[(&[usize], &[usize], &[usize])],
) -> Result<([usize; 3], usize)> {
    let hidden = net.hidden();
    let observed = net.observed();
    if hidden.len() != 1 || observed.len() != 3 {
        return Err(Error::FamilyMismatch(format!(
            "{family} needs three observed nodes and one hidden node, got {} and {}",
            observed.len(),
            hidden.len()
        )));
    }
    let nodes = [observed[0], observed[1], observed[2], hidden[0]];
    let map = |ps: &[usize]| ps.iter().map(|&p| nodes[p]).collect::<Vec<_>>();
    for &(a, b, c) in required {
        let stmt = CIStatement::new(net, &map(a), &map(b), &map(c))?;
        if !d_separated(net, &stmt) {
            return Err(Error::FamilyMismatch(format!(
                "{family} needs {}, which the network does not imply",
                stmt.display(net)
            )));
        }
    }
    let c = |i: usize| net.node(nodes[i]).card;
    Ok(([c(0), c(1), c(2)], c(3)))
}

/// Generates `family` for `net`.
///
/// `CI_MINORS` takes the union over the local Markov statements, dropping
/// hidden nodes from the second block and skipping statements whose node or
/// parents are hidden. `NB2_FLATTENING` needs a naive Bayes network. The other
/// families need observed `X1, X2, X3` and hidden `H` (in node order) and the
/// independences the construction rests on: `X1 ⊥ X3 | X2` for the quadratic
/// family, `X1 ⊥ X2 | {X3, H}` for the cubic family, and `X1 ⊥ X3 | {X2, H}`
/// with `X2 ⊥ H | X3` for the sextic family.
pub fn constraints_for_network(net: &NetworkSpec, family: Family, conjectural: bool) -> Result<ConstraintSet> {
    match family {
        Family::CiMinors => {
            let hidden = net.hidden();
            let mut cs = ConstraintSet::new(family, net.observed_shape());
            for stmt in local_markov_statements(net) {
                if stmt.a().iter().chain(stmt.c()).any(|n| hidden.contains(n)) {
                    continue;
                }
                let b: Vec<usize> = stmt.b().iter().copied().filter(|n| !hidden.contains(n)).collect();
                if b.is_empty() {
                    continue;
                }
                add_ci_minors(net, &CIStatement::new(net, stmt.a(), &b, stmt.c())?, &mut cs)?;
            }
            Ok(cs)
        }
        Family::Nb2Flattening => {
            let nb = NaiveBayesSpec::from_network(net)
                .ok_or_else(|| Error::FamilyMismatch(format!("{family} needs a naive Bayes network")))?;
            nb2_flattening_constraints(&nb).map_err(|e| Error::FamilyMismatch(e.to_string()))
        }
        Family::Quadratic => {
            let (o, h) = triple(net, family, &[(&[0], &[2], &[1])])?;
            quadratic_family_constraints(o, h)
        }
        Family::Cubic => {
            let (o, h) = triple(net, family, &[(&[0], &[1], &[2, 3])])?;
            cubic_family_constraints(o, h)
        }
        Family::Sextic => {
            let (o, h) = triple(net, family, &[(&[0], &[2], &[1, 3]), (&[1], &[3], &[2])])?;
            sextic_family_constraints(o, h, conjectural)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constraints::models::chain_network;
    use crate::polyring::canonical_text;

    #[test]
    fn chain_minor_matches_hand_expansion() {
        let net = chain_network([2, 2, 2]).unwrap();
        let stmt = CIStatement::from_names(&net, &["X2"], &["X3"], &["X1"]).unwrap();
        let cs = ci_minor_ideal(&net, &stmt).unwrap();
        assert_eq!(cs.len(), 2);
        assert_eq!(
            canonical_text(&cs.polys()[0], cs.shape()),
            "+1 t[0,0,0]t[0,1,1] -1 t[0,0,1]t[0,1,0]"
        );
    }

    #[test]
    fn ci_minor_counts() {
        for cards in [[2, 2, 2], [3, 2, 3], [2, 4, 3], [3, 3, 3]] {
            let net = chain_network(cards).unwrap();
            let stmt = CIStatement::from_names(&net, &["X2"], &["X3"], &["X1"]).unwrap();
            let n = |r: usize| r * (r - 1) / 2;
            assert_eq!(
                ci_minor_ideal(&net, &stmt).unwrap().len(),
                cards[0] * n(cards[1]) * n(cards[2])
            );
        }
    }

    #[test]
    fn slice_sizes_follow_block_cardinalities() {
        let net = crate::net_model::network_from_parts(&[
            ("A", 2, &[], false),
            ("B", 3, &[], false),
            ("C", 2, &["A"], false),
        ])
        .unwrap();
        let stmt = CIStatement::from_names(&net, &["A"], &["B"], &["C"]).unwrap();
        assert_eq!(ci_minor_ideal(&net, &stmt).unwrap().len(), 6);
        let net = crate::net_model::network_from_parts(&[("A", 2, &[], false), ("B", 2, &["A"], false)]).unwrap();
        let stmt = CIStatement::from_names(&net, &["A"], &["B"], &[]).unwrap();
        assert_eq!(ci_minor_ideal(&net, &stmt).unwrap().len(), 1);
    }

    #[test]
    fn ci_minor_marginalizes_unmentioned_nodes() {
        let net = chain_network([2, 2, 2]).unwrap();
        let stmt = CIStatement::from_names(&net, &["X2"], &["X3"], &[]).unwrap();
        let cs = ci_minor_ideal(&net, &stmt).unwrap();
        assert_eq!(cs.len(), 1);
        assert_eq!(cs.polys()[0].num_terms(), 8);
    }

    #[test]
    fn ci_minor_rejects_hidden_nodes() {
        let net = NaiveBayesSpec::new(2, vec![2, 2]).unwrap().to_network();
        let stmt = CIStatement::from_names(&net, &["X1"], &["X2"], &["H"]).unwrap();
        assert!(matches!(ci_minor_ideal(&net, &stmt), Err(Error::Statement(_))));
    }

    #[test]
    fn nb2_counts() {
        let count = |f: Vec<usize>| {
            nb2_flattening_constraints(&NaiveBayesSpec::new(2, f).unwrap())
                .unwrap()
                .len()
        };
        assert_eq!(count(vec![3, 3]), 1);
        assert_eq!(count(vec![2, 2, 2]), 0);
        assert_eq!(count(vec![2, 2, 3]), 4);
        assert!(nb2_flattening_constraints(&NaiveBayesSpec::new(3, vec![3, 3]).unwrap()).is_err());
    }

    #[test]
    fn hidden_family_counts() {
        assert_eq!(quadratic_family_constraints([2, 2, 2], 2).unwrap().len(), 2);
        assert_eq!(quadratic_family_constraints([3, 2, 3], 3).unwrap().len(), 18);
        assert_eq!(cubic_family_constraints([3, 3, 2], 2).unwrap().len(), 2);
        assert_eq!(cubic_family_constraints([4, 3, 2], 2).unwrap().len(), 8);
        assert_eq!(cubic_family_constraints([2, 3, 2], 2).unwrap().len(), 0);
        assert_eq!(sextic_family_constraints([2, 3, 3], 2, false).unwrap().len(), 3);
        assert_eq!(sextic_family_constraints([2, 4, 3], 2, false).unwrap().len(), 6);
        for p in sextic_family_constraints([2, 3, 3], 2, false).unwrap().polys() {
            assert_eq!(p.degree(), 6);
        }
    }

    #[test]
    fn hidden_family_preconditions() {
        assert!(matches!(
            cubic_family_constraints([3, 3, 2], 3),
            Err(Error::FamilyMismatch(_))
        ));
        assert!(matches!(
            sextic_family_constraints([2, 3, 3], 3, false),
            Err(Error::FamilyMismatch(_))
        ));
        assert!(matches!(
            sextic_family_constraints([2, 3, 2], 2, false),
            Err(Error::FamilyMismatch(_))
        ));
        assert!(matches!(
            sextic_family_constraints([3, 3, 3], 2, false),
            Err(Error::FamilyMismatch(_))
        ));
        assert!(quadratic_family_constraints([1, 2, 2], 2).is_err());
        let cs = sextic_family_constraints([3, 3, 3], 2, true).unwrap();
        assert!(cs.is_conjectural());
        assert_eq!(cs.len(), 9);
        assert!(!sextic_family_constraints([2, 3, 3], 2, true).unwrap().is_conjectural());
    }

    #[test]
    fn dispatch_checks_network_pattern() {
        let nb = NaiveBayesSpec::new(2, vec![3, 3]).unwrap().to_network();
        assert_eq!(
            constraints_for_network(&nb, Family::Nb2Flattening, false)
                .unwrap()
                .len(),
            1
        );
        assert!(matches!(
            constraints_for_network(&nb, Family::Cubic, false),
            Err(Error::FamilyMismatch(_))
        ));
        let chain = chain_network([2, 2, 2]).unwrap();
        assert!(matches!(
            constraints_for_network(&chain, Family::Nb2Flattening, false),
            Err(Error::FamilyMismatch(_))
        ));
        // X1 ⊥ ∅, X2 ⊥ X3 | X1, X3 ⊥ ∅: two minors.
        assert_eq!(
            constraints_for_network(&chain, Family::CiMinors, false).unwrap().len(),
            2
        );
        let sextic = crate::constraints::models::sextic_network([2, 3, 3], 2).unwrap();
        assert_eq!(
            constraints_for_network(&sextic, Family::Sextic, false).unwrap().len(),
            3
        );
    }

    #[test]
    fn dispatch_requires_the_family_independences() {
        use crate::constraints::models::{cubic_network, quadratic_network, sextic_network};
        let quad = quadratic_network([2, 2, 2], 2).unwrap();
        let cubic = cubic_network([3, 3, 2], 2).unwrap();
        let sextic = sextic_network([2, 3, 3], 2).unwrap();
        assert!(constraints_for_network(&quad, Family::Quadratic, false).is_ok());
        assert!(constraints_for_network(&cubic, Family::Cubic, false).is_ok());
        assert!(constraints_for_network(&sextic, Family::Sextic, false).is_ok());
        for (net, family) in [
            (&cubic, Family::Quadratic),
            (&sextic, Family::Cubic),
            (&cubic, Family::Sextic),
        ] {
            assert!(matches!(
                constraints_for_network(net, family, false),
                Err(Error::FamilyMismatch(_))
            ));
        }
        // naive Bayes with a binary class implies X1 ⊥ X2 | {X3, H}
        let nb = NaiveBayesSpec::new(2, vec![3, 3, 2]).unwrap().to_network();
        assert_eq!(constraints_for_network(&nb, Family::Cubic, false).unwrap().len(), 2);
        assert!(constraints_for_network(&nb, Family::Sextic, false).is_err());
    }
}

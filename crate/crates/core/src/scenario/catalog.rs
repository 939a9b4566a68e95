use super::spec::{AlgebraSpec, Check, MetricSpec, ScenarioSpec, SubgroupSpec};
use crate::arith::{Backend, Rational, ToleranceProfile};
use crate::lie::{build_classical, emit_structure_table, so_index, Algebra, Family};
use crate::subspace::{emit_subspace, Subspace};

fn base(name: &str, description: &str, family: &str, n: usize, checks: &[Check]) -> ScenarioSpec {
    ScenarioSpec {
        name: name.into(),
        description: description.into(),
        algebra: AlgebraSpec {
            family: Some(family.into()),
            n: Some(n),
            table: None,
            table_file: None,
        },
        subgroup: SubgroupSpec::default(),
        subspaces: Default::default(),
        metric: MetricSpec::default(),
        checks: checks.to_vec(),
        backend: Backend::Exact,
        seed: 1,
        samples: 64,
        tolerance: ToleranceProfile::default(),
        budget_secs: None,
    }
}

fn so_grid(n: usize, partition: &[usize]) -> ScenarioSpec {
    let tag: String = partition.iter().map(|p| p.to_string()).collect();
    let mut s = base(
        &format!("so{n}-{tag}-grid"),
        &format!(
            "200 seeded block-scalar metrics on so({n}) over the block subgroup {:?}; g.o. against the naturally reductive shape",
            partition
        ),
        "so",
        n,
        &[Check::Validate, Check::Regularity, Check::Sweep],
    );
    s.subgroup.partition = Some(partition.to_vec());
    s.metric.grid = Some(200);
    s.budget_secs = Some(600);
    s
}

/// `so(5) ⊃ so(4) ⊃ so(3)` with `h = so(3)`, `u` its complement in `so(4)` and
/// `p` the complement of `so(4)`, all read from a structure table.
fn triple_shape() -> ScenarioSpec {
    let n = 5;
    let structure = build_classical::<Rational>(Family::So, n).expect("so(5)");
    let table = emit_structure_table(&structure);
    let alg = Algebra::with_killing("so(5)", structure, ToleranceProfile::default()).expect("so(5) is compact");
    let coords = |pred: &dyn Fn(usize, usize) -> bool| -> Vec<usize> {
        let mut v = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if pred(i, j) {
                    v.push(so_index(n, i, j));
                }
            }
        }
        v
    };
    let h = Subspace::coordinate(&alg, &coords(&|_, j| j < 3));
    let u = Subspace::coordinate(&alg, &coords(&|_, j| j == 3));
    let p = Subspace::coordinate(&alg, &coords(&|_, j| j == 4));
    let mut s = base(
        "triple-shape-demo",
        "Q on h + x Q on u + y Q on p for so(5) > so(4) > so(3), read from a structure table",
        "so",
        n,
        &[Check::All],
    );
    s.algebra = AlgebraSpec {
        table: Some(table),
        ..Default::default()
    };
    s.subspaces.insert("h".into(), emit_subspace(&h));
    s.subspaces.insert("u".into(), emit_subspace(&u));
    s.subspaces.insert("p".into(), emit_subspace(&p));
    s.subgroup.spaces = vec!["h".into()];
    s.metric.blocks = Some("block h scalar 1\nblock u scalar 2\nblock p scalar 3\n".into());
    s.budget_secs = Some(60);
    s
}

/// The built-in scenarios.
pub fn scenario_catalog() -> Vec<ScenarioSpec> {
    let mut so9 = base(
        "so9-333-regularity",
        "so(3)+so(3)+so(3) in so(9): not regular, weakly regular, self-normalizing",
        "so",
        9,
        &[Check::Validate, Check::Regularity],
    );
    so9.subgroup.partition = Some(vec![3, 3, 3]);
    so9.budget_secs = Some(10);

    let mut so12 = base(
        "so12-partition4-genmet1",
        "four so(3) blocks in so(12) with six off-diagonal modules and distinct scalars",
        "so",
        12,
        &[Check::All],
    );
    so12.subgroup.partition = Some(vec![3, 3, 3, 3]);
    so12.metric.params = Some((1..=10).map(super::spec::RationalLit::Int).collect());
    so12.samples = 16;
    so12.budget_secs = Some(300);

    let mut su3 = base(
        "su3-torus-flag",
        "metrics on su(3) invariant under the maximal torus: any inner product on the torus plus one scalar per root module",
        "su",
        3,
        &[Check::Validate, Check::Regularity, Check::Sweep],
    );
    su3.subgroup.torus = true;
    su3.metric.grid = Some(60);
    su3.budget_secs = Some(300);

    vec![
        so_grid(6, &[2, 2, 2]),
        so_grid(7, &[2, 2, 3]),
        so_grid(8, &[2, 3, 3]),
        so9,
        so12,
        su3,
        triple_shape(),
    ]
}

pub fn find_scenario(name: &str) -> Option<ScenarioSpec> {
    scenario_catalog().into_iter().find(|s| s.name == name)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_entries_validate() {
        let c = scenario_catalog();
        assert!(c.len() >= 7);
        for s in &c {
            s.validate().unwrap();
            assert!(s.budget_secs.is_some(), "{}", s.name);
            let back = ScenarioSpec::parse(&s.to_toml()).unwrap();
            assert_eq!(&back, s, "{}", s.name);
        }
        let names: Vec<&str> = c.iter().map(|s| s.name.as_str()).collect();
        assert!(names.contains(&"so6-222-grid"));
        assert_eq!(find_scenario("so6-222-grid").unwrap().subgroup.partition, Some(vec![2, 2, 2]));
    }

    #[test]
    fn so12_has_four_blocks_and_six_modules() {
        let s = find_scenario("so12-partition4-genmet1").unwrap();
        assert_eq!(s.subgroup.partition.as_ref().unwrap().len(), 4);
        assert_eq!(s.metric.params.as_ref().unwrap().len(), 4 + 6);
    }
}

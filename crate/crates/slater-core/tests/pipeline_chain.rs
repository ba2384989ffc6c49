//! Integration of the full reduction chain, from a graph down to either
//! layout metadata or an actual seven-voter profile, checking the decision
//! and weight bookkeeping at every stage it crosses.

use slater_core::formulas::{max_independent_set_parity, max_model_decide, Graph};
use slater_core::gadget::{cnf_to_tournament, find_min_params, GadgetPlan};
use slater_core::io;
use slater_core::pipeline::{graph_to_maxmodel, maxmodel_to_restricted, reindex_pcnf_dvar_last};
use slater_core::solver;
use slater_core::tournament::aggregate_majority;
use slater_core::voters::build_seven_voters;

#[test]
fn single_vertex_graph_down_to_layout_metadata() {
    // One isolated vertex: its only maximum independent set has odd size,
    // so every stage must answer "yes".
    let g = Graph::new(1, &[]).unwrap();
    let parity = max_independent_set_parity(&g).unwrap();
    assert!(parity.odd);

    let enc = graph_to_maxmodel(&g).unwrap();
    let l3 = max_model_decide(&enc.instance).unwrap();
    assert!(l3.dvar_true_at_max);
    assert_eq!(l3.max_weight, 3, "all three variables can be true");

    let restricted = maxmodel_to_restricted(&enc.instance).unwrap();
    let inner = restricted.pcnf.instance();
    assert_eq!(inner.cnf().num_vars(), 12);
    assert_eq!(inner.cnf().num_clauses(), 16);
    let l4 = max_model_decide(inner).unwrap();
    assert!(l4.dvar_true_at_max);
    assert_eq!(l4.max_weight, 4 * l3.max_weight);

    // The distinguished variable is copy 1 of the old one; move it last
    // before laying out the gadget.
    let (pcnf, _) = reindex_pcnf_dvar_last(&restricted.pcnf);
    assert_eq!(pcnf.instance().dvar(), 12);
    let params = find_min_params(12, 16);
    let plan = GadgetPlan::new(pcnf.instance(), params).unwrap();
    assert_eq!(plan.module_count(), 6 * 12 + 16);
    assert_eq!(plan.total_vertices(), 72 * params.s1 + 25 + 16 * params.s2);
    // Designated vertex: the sink of the last section's F module, directly
    // before the clause-module block.
    assert_eq!(
        plan.designated(),
        plan.total_vertices() - 16 * params.s2 - 1
    );

    // Too large to materialize, but the metadata file round-trips.
    let file = io::LayoutFile::of_plan(&plan);
    assert_eq!(
        io::parse_layout(&io::serialize_layout(&file)).unwrap(),
        file
    );
}

#[test]
fn implication_formula_down_to_seven_voters() {
    // phi = (!x1 | x2), distinguished x2. Restriction keeps it a single
    // left clause over two copy variables; the gadget's designated vertex
    // must be a Slater winner, and the seven voters must realize the
    // gadget exactly.
    let inst = slater_core::formulas::MaxModelInstance::new(
        slater_core::formulas::Cnf::new(2, vec![vec![-1, 2]]).unwrap(),
        2,
    )
    .unwrap();
    let restricted = maxmodel_to_restricted(&inst).unwrap();
    let (pcnf, _) = reindex_pcnf_dvar_last(&restricted.pcnf);
    let params = find_min_params(2, 1);
    let layout = cnf_to_tournament(pcnf.instance(), &params).unwrap();

    let analysis = solver::slater_analyze(&layout.tournament, Some(&layout.partition)).unwrap();
    let designated = layout.designated();
    assert_eq!(analysis.scores[designated as usize], analysis.min_fas);

    let (profile, _) = build_seven_voters(&layout, &pcnf).unwrap();
    let outcome = aggregate_majority(&profile).unwrap();
    assert_eq!(outcome.tournament, layout.tournament);

    // Round-trip the profile through its file format and re-aggregate.
    let text = io::serialize_profile(&profile);
    let parsed = io::parse_profile(&text).unwrap();
    assert_eq!(
        aggregate_majority(&parsed).unwrap().tournament,
        layout.tournament
    );
}

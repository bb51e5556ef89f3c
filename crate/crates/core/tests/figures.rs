use bloch_pair::entanglement::{classify_decay, DecayClass};
use bloch_pair::figures::{run_figure, FigureOptions};

fn opts(steps: usize) -> FigureOptions {
    FigureOptions {
        steps,
        ..Default::default()
    }
}

#[test]
fn fig4_fast_relaxation_dies_suddenly() {
    let curves = run_figure(4, None, &opts(2001)).unwrap();
    let fast = curves.iter().find(|c| c.name == "fig4_alpha2.5").unwrap();
    assert!(matches!(classify_decay(&fast.table.rows), DecayClass::SuddenDeath { t } if t > 0.3 && t < 0.33));
}

#[test]
fn fig4_quarter_alpha_decays_asymptotically() {
    // below alpha = 1/4 the coherence outlives the population product
    let curves = run_figure(
        4,
        None,
        &FigureOptions {
            t_max: 8.0,
            steps: 801,
            ..Default::default()
        },
    )
    .unwrap();
    let slow = curves.iter().find(|c| c.name == "fig4_alpha0.25").unwrap();
    let rows = &slow.table.rows;
    assert!(rows.iter().all(|r| r.1 > 1e-9));
    assert!(rows.last().unwrap().1 < rows[rows.len() / 2].1);
}

#[test]
fn fig7_initial_values() {
    for c in run_figure(7, Some("a"), &opts(11)).unwrap() {
        assert!((c.table.rows[0].1 - 3.0).abs() < 1e-12, "{}", c.name);
    }
    for c in run_figure(7, Some("b"), &opts(11)).unwrap() {
        assert!((c.table.rows[0].1 - 2.5).abs() < 1e-12, "{}", c.name);
    }
}

#[test]
fn fig3_and_fig6_emit_both_variants() {
    for id in [3, 6] {
        let names: Vec<_> = run_figure(id, None, &opts(5))
            .unwrap()
            .into_iter()
            .map(|c| c.name)
            .collect();
        assert_eq!(names.len(), 10);
        assert!(names.iter().any(|n| n.contains("-caption_")));
        assert!(names.iter().any(|n| n.contains("-body_")));
    }
}

#[test]
fn rows_are_strictly_increasing_in_time() {
    for c in run_figure(5, None, &opts(101)).unwrap() {
        assert_eq!(c.table.rows.len(), 101);
        assert!(c.table.rows.windows(2).all(|w| w[0].0 < w[1].0));
    }
}

use schatten_core::graphs::{
    chung_lu_sample, classify_regime, degree_histogram_slope, power_law_weights, sample_graphs, DegreeModel,
    ModelSpec, Regime,
};
use schatten_core::walk::stream_rng;

#[test]
fn power_law_degree_tail_slope() {
    let model = power_law_weights(4096, 3.0, 64.0, 2.0).unwrap();
    let graphs: Vec<_> = sample_graphs(&model, 4, 1).unwrap().into_iter().map(|g| g.adjacency).collect();
    let slope = degree_histogram_slope(&graphs, 3).unwrap();
    assert!((slope + 3.0).abs() <= 0.3, "{slope}");
}

#[test]
fn uniform_model_mean_degree() {
    let model = DegreeModel::uniform(1000, 100.0).unwrap();
    let g = chung_lu_sample(&model, &mut stream_rng(3, 0), true).unwrap();
    let mean = g.adjacency.nnz() as f64 / 1000.0;
    assert!((mean - 100.0).abs() < 2.0, "{mean}");
    assert_eq!(classify_regime(&model).0, Regime::SecondOrderDegree);
}

#[test]
fn model_file_builds() {
    let path: std::path::PathBuf =
        [env!("CARGO_MANIFEST_DIR"), "..", "..", "fixtures", "models", "power_law_small.json"].iter().collect();
    let spec: ModelSpec = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    let model = spec.build().unwrap();
    assert_eq!(model.n(), 1024);
    assert!((model.d_bar - 4.0).abs() < 1e-6);
}

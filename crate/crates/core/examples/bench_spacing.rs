fn main() {
    let t = std::time::Instant::now();
    let cfg = kfree_core::spacing::SpacingGridConfig {
        qs: vec![9], ks: vec![2], n_max: 14, trials: 200, seed: 0x5eed,
        enum_cap: 1 << 16,
    };
    let s = kfree_core::spacing::run_spacing_grid(&cfg).unwrap();
    println!("q=9 k=2 cells={} reports={} violations={} in {:?}", s.cells, s.reports, s.violations.len(), t.elapsed());
}

use kljn_transient::line::network_mean_squares;
use kljn_transient::montecarlo::validate_steady_state;
use kljn_transient::noise::BOLTZMANN;
use kljn_transient::protocol::TrialConfig;

#[test]
fn short_cable_reduces_to_lumped_levels() {
    let (t, b, rh, rl) = (7e15, 5e3, 11e3, 2e3);
    let sh = (4.0 * BOLTZMANN * t * rh * b).sqrt();
    let sl = (4.0 * BOLTZMANN * t * rl * b).sqrt();
    // Cable capacitance t_f / Z0 far below the resistors' corner.
    let ms = network_mean_squares(50.0, 1e-12, rh, rl, sh, sl, b, 2000);
    let rp = rh * rl / (rh + rl);
    let rs = rh + rl;
    assert!((ms.v_a / (4.0 * BOLTZMANN * t * rp * b) - 1.0).abs() < 1e-4);
    assert!((ms.i_a / (4.0 * BOLTZMANN * t * b / rs) - 1.0).abs() < 1e-4);
    assert!((ms.i_b / ms.i_a - 1.0).abs() < 1e-4);
}

#[test]
fn network_voltage_is_nearly_symmetric() {
    let (t, b, rh, rl) = (7e15, 5e3, 11e3, 2e3);
    let sh = (4.0 * BOLTZMANN * t * rh * b).sqrt();
    let sl = (4.0 * BOLTZMANN * t * rl * b).sqrt();
    let hl = network_mean_squares(50.0, 1e-5, rh, rl, sh, sl, b, 20_000);
    let lh = network_mean_squares(50.0, 1e-5, rl, rh, sl, sh, b, 20_000);
    assert!((hl.v_a / lh.v_a - 1.0).abs() < 0.01);
    assert!((hl.v_a / hl.v_b - 1.0).abs() < 0.01);
}

#[test]
fn simulated_steady_state_matches_line_network() {
    let report = validate_steady_state(&TrialConfig::default(), 0.2, 3).unwrap();
    for name in [
        "voltage_ms_vs_line_network",
        "current_ms_vs_line_network",
        "hl_minus_lh_voltage_ms",
        "mean_power_flow",
    ] {
        let c = report.check(name).unwrap();
        assert!(c.passed, "{c}");
    }
    assert!(report.settle_time > 0.0 && report.settle_time < 0.01);
}

use ctp_coulomb::scan_fit::{fit_power_law, log_spaced, scan};
use ctp_coulomb::PlasmaParams;

fn template() -> PlasmaParams {
    PlasmaParams::new(0.05).unwrap()
}

#[test]
fn single_density_reproduces_touching_point() {
    let res = scan(&[0.05], &template()).unwrap();
    assert_eq!(res.rows.len(), 1);
    let q_cl = res.rows[0].q_cl.unwrap();
    assert!((q_cl - 0.1875).abs() < 0.004, "q_cl={q_cl}");
}

#[test]
fn two_point_fit_predicts_its_inputs() {
    let res = scan(&[0.04, 0.01], &template()).unwrap();
    assert!(res.rows[0].r_s < res.rows[1].r_s);
    let fit = fit_power_law(&res.q_cl_points()).unwrap();
    assert!(fit.residual < 1e-12);
    for row in &res.rows {
        let q_cl = row.q_cl.unwrap();
        assert!((fit.predict(row.r_s) - q_cl).abs() < 1e-10 * q_cl);
    }
}

#[test]
fn sweep_is_close_to_a_power_law() {
    let rs = log_spaced(0.01, 0.3, 12);
    let res = scan(&rs, &template()).unwrap();
    for row in &res.rows {
        assert!(row.q_cl.unwrap() > 0.0 && row.z_cl.unwrap() > 0.0 && row.q_tf > 0.0 && row.z_pl > 0.0);
    }
    let fq = fit_power_law(&res.q_cl_points()).unwrap();
    let fz = fit_power_law(&res.z_cl_points()).unwrap();
    assert!(fq.residual < 0.02, "q_cl rms {}", fq.residual);
    assert!(fz.residual < 0.02, "z_cl rms {}", fz.residual);

    // Ratios to the screening and plasma scales drift slowly with density.
    let q_ratio: Vec<_> = res.rows.iter().map(|r| (r.r_s, r.q_ratio.unwrap())).collect();
    let z_ratio: Vec<_> = res.rows.iter().map(|r| (r.r_s, r.z_ratio.unwrap())).collect();
    for pts in [q_ratio, z_ratio] {
        let slope = fit_power_law(&pts).unwrap().exponent;
        assert!(slope.abs() < 0.1, "ratio slope {slope}");
    }
}

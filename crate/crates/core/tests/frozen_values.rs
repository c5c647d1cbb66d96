//! Library values against 50-digit evaluations, frozen here.

use riclab::bounds::{gaussian_srsr_curve, psi0_singular, small_rho_conditions};
use riclab::core_math::{log_binomial, shannon_entropy, stirling_theta};
use riclab::rate::{t_zero, GrowthPoint, RateModel};
use riclab::FsConstants;

fn close(got: f64, want: f64, rel: f64) {
    assert!((got / want - 1.0).abs() <= rel, "got {got}, want {want}");
}

#[test]
fn stirling_theta_frozen() {
    close(stirling_theta(1.0).unwrap(), 0.972_737_601_543_927_1, 1e-13);
    close(stirling_theta(10.0).unwrap(), 0.999_667_612_003_544_6, 1e-12);
    close(stirling_theta(100.0).unwrap(), 0.999_996_666_761_897_6, 1e-12);
}

#[test]
fn log_binomial_frozen() {
    close(log_binomial(1000, 500).unwrap(), 689.467_261_567_851_2, 1e-13);
    close(log_binomial(60, 17).unwrap(), 33.590_018_458_096_07, 1e-13);
}

#[test]
fn entropy_frozen() {
    close(shannon_entropy(0.02).unwrap(), 0.098_039_113_279_731_98, 1e-15);
}

#[test]
fn t_zero_frozen() {
    let pt = GrowthPoint::new(0.5, 0.04).unwrap();
    close(t_zero(&RateModel::ds(), &pt).unwrap(), 0.626_223_964_024_795_1, 1e-14);
}

#[test]
fn gaussian_curve_frozen() {
    close(gaussian_srsr_curve(0.001).unwrap(), 9.181_162_959_964_826e-8, 1e-10);
    close(
        psi0_singular(0.001, &RateModel::ds()).unwrap(),
        9.181_162_959_964_826e-8,
        1e-10,
    );
    close(
        small_rho_conditions(0.001, &RateModel::ds()).unwrap(),
        2.184_105_189_119_965_8e-11,
        1e-10,
    );
}

#[test]
fn unit_crossing_frozen() {
    let (mut lo, mut hi) = (0.0028, 0.0033);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if gaussian_srsr_curve(mid).unwrap() < 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    close(lo, 0.003_047_812_810_374_14, 1e-10);
}

#[test]
fn rademacher_derived_constants_frozen() {
    let c = FsConstants::published();
    close(c.c_fs_from_c_rad(), 837.055_945_710_918_4, 1e-14);
    close(c.v_rad_from_c_rad(), 3_242.083_937_409_077_5, 1e-14);
}

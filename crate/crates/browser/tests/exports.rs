use dbmc_browser::{curves, error_sweep, simulate};

#[test]
fn curves_share_the_free_peak_until_light() {
    let out = curves(5.0, 1e-10, 16.0, 50.0, 0.2).unwrap();
    let n = out.len() / 4;
    let (times, none, enzyme, photo) =
        (&out[..n], &out[n..2 * n], &out[2 * n..3 * n], &out[3 * n..]);
    let peak = (0..n).max_by(|&a, &b| none[a].total_cmp(&none[b])).unwrap();
    assert!((times[peak] - 0.042).abs() < 1e-9);
    for i in 1..n {
        assert!(enzyme[i] < none[i]);
        if times[i] < 0.0416 {
            assert_eq!(photo[i], none[i]);
        } else {
            assert!(photo[i] < none[i]);
        }
    }
}

#[test]
fn sweep_layout_and_limits() {
    let out = error_sweep(24.78, 10_000, 40, 0.5).unwrap();
    assert_eq!(out.len(), 3 * 41);
    for method in out.chunks(41) {
        assert_eq!(method[0], 0.0);
        assert!(method.windows(2).all(|w| w[0] <= w[1]));
        assert!(method[40] <= 0.5);
    }
    assert!(out[41 + 7] < 1e-3);
    assert!(error_sweep(24.78, 10_000, 40, 1.5).is_err());
    assert!(error_sweep(20.0, 10, 40, 0.5).is_err());
}

#[test]
fn page_simulation_is_seeded() {
    let a = simulate("enzyme", 1000, 4, 0.1, 3).unwrap();
    assert_eq!(a, simulate("enzyme", 1000, 4, 0.1, 3).unwrap());
    assert_eq!(a.len(), 3 * 101);
    assert!(simulate("none", 1_000_000, 100, 0.5, 3).is_err());
    assert!(simulate("sunlight", 1000, 4, 0.1, 3).is_err());
}

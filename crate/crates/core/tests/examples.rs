use dirac_spectra::clifford::{build_gammas, Signature};
use dirac_spectra::linalg::{self, c, CMatrix};
use dirac_spectra::multop::{
    self, adjoint_family, classify, point_spectrum, resolvent_scan, truncated_matrix, DivergenceCriterion,
    FiberFamily, FnFamily, IndexDomain, Ray, Verdict, WitnessValue,
};
use dirac_spectra::product_spectra::{product_point_spectrum, FiberEigenvalueList};
use dirac_spectra::report::PointValue;
use dirac_spectra::symbol::DiracSymbol;
use num_complex::Complex64;

fn plane() -> DiracSymbol {
    DiracSymbol::new(Signature::new(1, 1).unwrap()).unwrap()
}

fn values(points: &[PointValue]) -> Vec<Complex64> {
    points.iter().map(PointValue::value).collect()
}

#[test]
fn dirac_point_spectrum_window_one() {
    let got = values(&point_spectrum(&plane(), 1).unwrap());
    let expected = [c(0.0, 0.0), c(1.0, 0.0), c(-1.0, 0.0), c(0.0, 1.0), c(0.0, -1.0)];
    assert_eq!(got.len(), 5);
    assert!(linalg::hausdorff_distance(&got, &expected) < 1e-12);
}

#[test]
fn scalar_families() {
    let zero = FnFamily::constant(IndexDomain::Integers(2), CMatrix::zeros(2, 2));
    assert_eq!(values(&point_spectrum(&zero, 2).unwrap()), vec![c(0.0, 0.0)]);

    let diag = FnFamily::new(IndexDomain::Integers(1), 1, |k| CMatrix::from_element(1, 1, c(k[0] as f64, 0.0)));
    let mut got: Vec<f64> = values(&point_spectrum(&diag, 3).unwrap()).iter().map(|z| z.re).collect();
    got.sort_by(f64::total_cmp);
    assert_eq!(got, vec![-3.0, -2.0, -1.0, 0.0, 1.0, 2.0, 3.0]);
}

#[test]
fn resolvent_scan_examples() {
    let ray = Ray::new(vec![1, 1]);
    let scan = resolvent_scan(&plane(), c(0.5, 0.0), &ray, 50).unwrap();
    let norms: Vec<f64> = scan.norms().into_iter().map(Option::unwrap).collect();
    for (j, n) in norms.iter().enumerate() {
        // At least linear growth: ‖R‖ >= (2j - 1/2) / (1/4).
        assert!(*n >= (2.0 * (j + 1) as f64 - 0.5) / 0.25 * (1.0 - 1e-12));
    }

    let two = FnFamily::constant(IndexDomain::Integers(2), CMatrix::identity(2, 2) * c(2.0, 0.0));
    let scan = resolvent_scan(&two, c(0.0, 0.0), &ray, 5).unwrap();
    assert!(scan.norms().iter().all(|n| (n.unwrap() - 0.5).abs() < 1e-15));

    let one = FnFamily::constant(IndexDomain::Integers(2), CMatrix::identity(2, 2));
    let scan = resolvent_scan(&one, c(1.0, 0.0), &ray, 5).unwrap();
    assert!(scan.norms().iter().all(Option::is_none));
}

#[test]
fn classification_examples() {
    let null = Ray::new(vec![1, 1]);
    let criterion = DivergenceCriterion::default();

    let point = classify(&plane(), c(1.0, 0.0), 1, &null, 200, criterion).unwrap();
    assert_eq!(point.verdict, Verdict::Point);
    assert!(point.witnesses.iter().any(|w| w.index == vec![0, 1]));

    let continuous = classify(&plane(), c(0.5, 0.0), 1, &null, 1000, criterion).unwrap();
    assert_eq!(continuous.verdict, Verdict::ContinuousEvidence);
    let norms: Vec<f64> = continuous
        .witnesses
        .iter()
        .map(|w| match w.value {
            WitnessValue::ResolventNorm(n) => n,
            WitnessValue::Eigenvalue(_) => panic!("eigenvalue witness in a continuous verdict"),
        })
        .collect();
    assert!(norms.windows(2).all(|w| w[1] > w[0]));
    assert!(*norms.last().unwrap() > 1e3);
    assert!(continuous.witnesses.iter().all(|w| w.index[0] == w.index[1]));

    let zero = FnFamily::constant(IndexDomain::Integers(2), CMatrix::zeros(2, 2));
    let bounded = classify(&zero, c(5.0, 0.0), 1, &null, 100, criterion).unwrap();
    assert_eq!(bounded.verdict, Verdict::ResolventBounded);
    match bounded.witnesses[0].value {
        WitnessValue::ResolventNorm(n) => assert!((n - 0.2).abs() < 1e-15),
        WitnessValue::Eigenvalue(_) => panic!(),
    }
}

#[test]
fn truncated_dirac_matrix_multiplicities() {
    let m = truncated_matrix(&plane(), 1, 4096).unwrap();
    assert_eq!(m.shape(), (18, 18));
    let got = linalg::eigenvalues(&m).unwrap();
    let mut expected = vec![c(0.0, 0.0); 10];
    for z in [c(1.0, 0.0), c(-1.0, 0.0), c(0.0, 1.0), c(0.0, -1.0)] {
        expected.extend([z, z]);
    }
    assert!(linalg::multiset_distance(&got, &expected).unwrap() < 1e-12);

    let id = FnFamily::constant(IndexDomain::Integers(3), CMatrix::identity(2, 2));
    assert_eq!(truncated_matrix(&id, 0, 4096).unwrap(), CMatrix::identity(2, 2));
}

#[test]
fn dirac_adjoint_is_conjugation_by_beta() {
    let symbol = plane();
    let beta = build_gammas(Signature::new(1, 1).unwrap()).unwrap().beta().clone();
    let beta_inv = beta.clone().try_inverse().unwrap();
    let adjoint = adjoint_family(&symbol);
    for k in IndexDomain::Integers(2).window(2) {
        let lhs = adjoint.at(&k);
        let rhs = -(&beta_inv * symbol.at(&k.iter().map(|&v| v as f64).collect::<Vec<_>>()).unwrap() * &beta);
        assert!(linalg::max_abs_entry(&(lhs - rhs)) < 1e-15);
    }
    let zero = FnFamily::constant(IndexDomain::Integers(1), CMatrix::zeros(3, 3));
    assert_eq!(adjoint_family(&zero).at(&[4]), CMatrix::zeros(3, 3));
}

#[test]
fn product_examples() {
    let zero = FiberEigenvalueList::simple(&[0.0]).unwrap();
    let got = values(&product_point_spectrum(&zero, 1).unwrap());
    let torus = values(&point_spectrum(&plane(), 1).unwrap());
    assert!(linalg::hausdorff_distance(&got, &torus) < 1e-12);
    assert_eq!(got.len(), 5);
}

#[test]
fn oracle_cap_default_is_4096() {
    assert_eq!(multop::DEFAULT_ORACLE_CAP, 4096);
}

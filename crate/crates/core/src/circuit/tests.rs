use super::*;
use proptest::prelude::*;
use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4};

fn re(x: f64) -> Complex {
    Complex::new(x, 0.0)
}

/// Full-register matrix of `u` on `targets` under `controls`, built entry by
/// entry from the definition.
fn brute_force_controlled(n: usize, u: &Matrix, targets: &[usize], controls: &[Control]) -> Matrix {
    let dim = 1usize << n;
    let tmask: usize = targets.iter().map(|&t| 1 << t).sum();
    let local = |i: usize| -> usize {
        let mut l = 0;
        for (b, &t) in targets.iter().enumerate() {
            if i & (1 << t) != 0 {
                l |= 1 << b;
            }
        }
        l
    };
    let mut m = Matrix::zeros(dim);
    for j in 0..dim {
        let fires = controls.iter().all(|c| ((j >> c.qubit) & 1 == 1) == c.polarity);
        for i in 0..dim {
            m[(i, j)] = if !fires {
                if i == j {
                    re(1.0)
                } else {
                    re(0.0)
                }
            } else if i & !tmask == j & !tmask {
                u[(local(i), local(j))]
            } else {
                re(0.0)
            };
        }
    }
    m
}

fn random_unitary_2(seed: u64) -> Matrix {
    // e^{iα} Rz(β) Ry(γ) Rz(δ) with angles from a hash of the seed.
    let a = (seed as f64 * 0.731).sin() * 3.0;
    let b = (seed as f64 * 1.913).cos() * 3.0;
    let c = (seed as f64 * 0.277).sin() * 3.0;
    let d = (seed as f64 * 2.411).cos() * 3.0;
    (&(&gates::rz_symmetric(b) * &gates::ry(c)) * &gates::rz_symmetric(d)).scale(Complex::from_polar(1.0, a))
}

#[test]
fn named_gate_matrices_are_exact() {
    let s = FRAC_1_SQRT_2;
    assert_eq!(gates::x(), Matrix::from_real(2, &[0.0, 1.0, 1.0, 0.0]));
    assert_eq!(gates::h(), Matrix::from_real(2, &[s, s, s, -s]));
    assert_eq!(gates::z(), Matrix::from_real(2, &[1.0, 0.0, 0.0, -1.0]));
    assert_eq!(gates::i(), Matrix::identity(2));
    assert_eq!(
        gates::sx(),
        Matrix::from_rows(
            2,
            vec![
                Complex::new(0.5, 0.5),
                Complex::new(0.5, -0.5),
                Complex::new(0.5, -0.5),
                Complex::new(0.5, 0.5)
            ]
        )
    );
    let phi = 0.3;
    assert_eq!(gates::rz(phi)[(1, 1)], Complex::from_polar(1.0, phi));
    assert!((&gates::sx() * &gates::sx()).approx_eq(&gates::x(), 1e-15));

    let mut cnot = Circuit::new(2).unwrap();
    cnot.cx(0, 1);
    // CNOT with control q0: |01> (index 1) <-> |11> (index 3).
    let expected = Matrix::from_real(
        4,
        &[
            1.0, 0.0, 0.0, 0.0, //
            0.0, 0.0, 0.0, 1.0, //
            0.0, 0.0, 1.0, 0.0, //
            0.0, 1.0, 0.0, 0.0,
        ],
    );
    assert_eq!(cnot.matrix_of().unwrap(), expected);

    let mut cz = Circuit::new(2).unwrap();
    cz.cz(1, 0);
    assert_eq!(
        cz.matrix_of().unwrap(),
        Matrix::diagonal(&[re(1.0), re(1.0), re(1.0), re(-1.0)])
    );

    let mut sw = Circuit::new(2).unwrap();
    sw.swap(0, 1);
    assert_eq!(sw.matrix_of().unwrap(), gates::swap());

    let mut h = Circuit::new(1).unwrap();
    h.h(0);
    assert_eq!(h.matrix_of().unwrap(), gates::h());
}

#[test]
fn run_examples() {
    let mut hh = Circuit::new(1).unwrap();
    hh.h(0).h(0);
    let s = hh.simulate().unwrap();
    assert!((s.amplitude(0) - re(1.0)).norm() < 1e-12);

    let mut xc = Circuit::new(2).unwrap();
    xc.x(0).cx(0, 1);
    let s = xc.simulate().unwrap();
    assert_eq!(
        crate::statevector::label(s.probabilities().iter().position(|&p| p > 0.5).unwrap(), 2),
        "11"
    );

    let empty = Circuit::new(3).unwrap();
    assert!(empty.matrix_of().unwrap().approx_eq(&Matrix::identity(8), 0.0));

    let mut state = StateVector::new_zero(3).unwrap();
    assert!(matches!(hh.run(&mut state), Err(Error::Argument(_))));
}

#[test]
fn inverse_examples() {
    let mut h = Circuit::new(1).unwrap();
    h.h(0);
    assert_eq!(h.inverse().gates(), h.gates());

    let mut r = Circuit::new(1).unwrap();
    r.rz(0, FRAC_PI_4);
    assert_eq!(r.inverse().gates()[0].kind, GateKind::Rz(-FRAC_PI_4));

    let mut s = Circuit::new(1).unwrap();
    s.sx(0);
    let inv = s.inverse();
    assert_eq!(inv.gates()[0].kind, GateKind::Unitary(gates::sxdg()));
    assert_eq!(inv.inverse().gates()[0].kind, GateKind::Sx);
}

#[test]
fn controlled_examples() {
    let mut x = Circuit::new(1).unwrap();
    x.x(0);
    let cx = x.controlled(1).unwrap();
    let mut reference = Circuit::new(2).unwrap();
    reference.cx(1, 0);
    assert_eq!(cx.matrix_of().unwrap(), reference.matrix_of().unwrap());

    // control reads |0>: nothing happens
    let s = cx.simulate().unwrap();
    assert_eq!(s, StateVector::new_zero(2).unwrap());

    let mut clash = Circuit::new(2).unwrap();
    clash.cx(0, 1);
    assert!(matches!(clash.controlled(0), Err(Error::Argument(_))));
}

#[test]
fn controlled_turns_global_phase_into_control_phase() {
    let mut c = Circuit::new(1).unwrap();
    c.x(0).add_global_phase(0.7);
    let m = c.controlled(1).unwrap().matrix_of().unwrap();
    let u = c.matrix_of().unwrap();
    let mut expected = Matrix::identity(4);
    for r in 0..2 {
        for col in 0..2 {
            expected[(2 + r, 2 + col)] = u[(r, col)];
        }
    }
    assert!(m.approx_eq(&expected, 1e-12));

    let off = c.controlled_on(Control::off(1)).unwrap().matrix_of().unwrap();
    let mut expected = Matrix::identity(4);
    for r in 0..2 {
        for col in 0..2 {
            expected[(r, col)] = u[(r, col)];
        }
    }
    assert!(off.approx_eq(&expected, 1e-12));
}

#[test]
fn power_examples() {
    let mut x = Circuit::new(1).unwrap();
    x.x(0);
    assert!(x.power(0).is_empty());
    assert!(x.power(2).matrix_of().unwrap().approx_eq(&Matrix::identity(2), 0.0));
}

#[test]
fn depth_and_counts() {
    let mut c = Circuit::new(2).unwrap();
    assert_eq!(c.depth(), 0);
    c.h(0).h(1);
    assert_eq!(c.depth(), 1);
    let mut d = Circuit::new(2).unwrap();
    d.h(0).cx(0, 1);
    assert_eq!(d.depth(), 2);
    let counts = d.gate_counts();
    assert_eq!(counts["h"], 1);
    assert_eq!(counts["cx"], 1);

    let mut m = Circuit::new(4).unwrap();
    m.mcx(&[Control::on(0), Control::on(1)], 2)
        .mcx(&[Control::on(0), Control::off(1), Control::on(3)], 2)
        .mcz(&[Control::on(0)], 1);
    let counts = m.gate_counts();
    assert_eq!(counts["ccx"], 1);
    assert_eq!(counts["mcx"], 1);
    assert_eq!(counts["cz"], 1);
}

#[test]
fn multi_controlled_matches_brute_force_matrix() {
    let cases: Vec<(usize, GateKind, Vec<usize>, Vec<Control>)> = vec![
        (3, GateKind::X, vec![2], vec![Control::on(0), Control::on(1)]),
        (
            4,
            GateKind::Z,
            vec![0],
            vec![Control::off(1), Control::on(3), Control::off(2)],
        ),
        (5, GateKind::H, vec![3], vec![Control::on(0), Control::off(4)]),
        (5, GateKind::Swap, vec![1, 4], vec![Control::on(2)]),
        (
            6,
            GateKind::Unitary(random_unitary_2(3)),
            vec![5],
            vec![
                Control::on(0),
                Control::on(1),
                Control::off(2),
                Control::on(3),
                Control::on(4),
            ],
        ),
        (
            6,
            GateKind::Unitary(gates::swap().kron(&random_unitary_2(9))),
            vec![2, 0, 4],
            vec![Control::off(5)],
        ),
    ];
    for (n, kind, targets, controls) in cases {
        let u = kind.matrix();
        let mut c = Circuit::new(n).unwrap();
        c.push(Gate::new(kind, targets.clone(), controls.clone()).unwrap())
            .unwrap();
        let got = c.matrix_of().unwrap();
        let want = brute_force_controlled(n, &u, &targets, &controls);
        assert!(got.approx_eq(&want, 1e-10), "n={n} targets={targets:?}");
    }
}

#[test]
fn controlled_matches_block_embedding() {
    let mut c = Circuit::new(3).unwrap();
    c.h(0).cx(0, 1).rz(2, 0.4).swap(1, 2).sx(0).add_global_phase(1.1);
    let u = c.matrix_of().unwrap();
    let cc = c.controlled(3).unwrap().matrix_of().unwrap();
    let mut want = Matrix::identity(16);
    for r in 0..8 {
        for col in 0..8 {
            want[(8 + r, 8 + col)] = u[(r, col)];
        }
    }
    assert!(cc.approx_eq(&want, 1e-10));
}

#[test]
fn double_control_is_symmetric() {
    let mut c = Circuit::new(3).unwrap();
    c.h(0).cz(0, 1).rz(2, -0.9).add_global_phase(0.4);
    let ab = c.controlled(3).unwrap().controlled(4).unwrap().matrix_of().unwrap();
    let ba = c.controlled(4).unwrap().controlled(3).unwrap().matrix_of().unwrap();
    assert!(ab.approx_eq(&ba, 1e-10));
}

#[test]
fn matrix_of_capacity() {
    let c = Circuit::new(11).unwrap();
    assert!(matches!(c.matrix_of(), Err(Error::Capacity(_))));
}

#[test]
fn text_format_parses_aliases_and_headers() {
    let src = "\
# demo
qubits 4
work 1
phase 0.5
name demo
h 0
cx 0 1
ccx 0 1 2
mcz 0 1 2 3
x 3 ; 0+ 1-
rz(0.25) 2
unitary(0,0,1,0,1,0,0,0) 1
";
    let c: Circuit = src.parse().unwrap();
    assert_eq!(c.n_qubits(), 4);
    assert_eq!(c.work_qubits(), 1);
    assert_eq!(c.global_phase(), 0.5);
    assert_eq!(c.name(), Some("demo"));
    assert_eq!(c.len(), 7);
    assert_eq!(c.gates()[2].controls, vec![Control::on(0), Control::on(1)]);
    assert_eq!(c.gates()[4].controls, vec![Control::on(0), Control::off(1)]);
    let again: Circuit = c.to_string().parse().unwrap();
    assert_eq!(again, c);
}

#[test]
fn text_format_reports_line_numbers() {
    let err = "qubits 2\nh 0\nfoo 1\n".parse::<Circuit>().unwrap_err();
    assert!(matches!(err, Error::Parse { line: 3, .. }), "{err}");
    let err = "h 0\n".parse::<Circuit>().unwrap_err();
    assert!(matches!(err, Error::Parse { line: 1, .. }));
    let err = "qubits 2\nx 2\n".parse::<Circuit>().unwrap_err();
    assert!(matches!(err, Error::Parse { line: 2, .. }));
    let err = "qubits 2\nx 1 ; 1+\n".parse::<Circuit>().unwrap_err();
    assert!(matches!(err, Error::Parse { line: 2, .. }));
}

fn arb_gate(n: usize) -> impl Strategy<Value = Gate> {
    let kinds = prop_oneof![
        Just(GateKind::X),
        Just(GateKind::H),
        Just(GateKind::Z),
        Just(GateKind::Sx),
        Just(GateKind::I),
        (-3.0f64..3.0).prop_map(GateKind::Rz),
        Just(GateKind::Swap),
        (0u64..1000).prop_map(|s| GateKind::Unitary(random_unitary_2(s))),
    ];
    (
        kinds,
        Just(()).prop_perturb(move |_, mut rng| {
            let mut order: Vec<usize> = (0..n).collect();
            for i in (1..n).rev() {
                order.swap(i, rng.random_range(0..=i));
            }
            let pol: Vec<bool> = (0..n).map(|_| rng.random()).collect();
            let ncontrols = rng.random_range(0..n);
            (order, pol, ncontrols)
        }),
    )
        .prop_map(move |(kind, (order, pol, ncontrols))| {
            let k = kind.arity();
            let targets = order[..k].to_vec();
            let controls = order[k..(k + ncontrols).min(n)]
                .iter()
                .map(|&q| Control {
                    qubit: q,
                    polarity: pol[q],
                })
                .collect();
            Gate::new(kind, targets, controls).unwrap()
        })
}

fn arb_circuit(n: usize) -> impl Strategy<Value = Circuit> {
    (prop::collection::vec(arb_gate(n), 0..25), -3.0f64..3.0).prop_map(move |(gates, phase)| {
        let mut c = Circuit::new(n).unwrap();
        for g in gates {
            c.push(g).unwrap();
        }
        c.add_global_phase(phase);
        c
    })
}

proptest! {
    #[test]
    fn inverse_undoes_circuit(c in arb_circuit(4), seed in 0usize..16) {
        let mut s = StateVector::basis(4, seed).unwrap();
        // mix the input a little so it is not a basis state
        let mut prep = Circuit::new(4).unwrap();
        prep.h(0).h(2).cx(0, 1).rz(3, 0.3);
        prep.run(&mut s).unwrap();
        let original = s.clone();
        c.run(&mut s).unwrap();
        prop_assert!((s.norm_sqr() - 1.0).abs() < 1e-9);
        c.inverse().run(&mut s).unwrap();
        for (a, b) in s.amplitudes().iter().zip(original.amplitudes()) {
            prop_assert!((a - b).norm() < 1e-10);
        }
    }

    #[test]
    fn text_round_trip(c in arb_circuit(4)) {
        let parsed: Circuit = c.to_string().parse().unwrap();
        prop_assert_eq!(parsed, c);
    }

    #[test]
    fn depth_bounded_by_gate_count(c in arb_circuit(4)) {
        prop_assert!(c.depth() <= c.len());
        prop_assert_eq!(c.gate_counts().values().sum::<usize>(), c.len());
    }

    #[test]
    fn matrix_is_unitary(c in arb_circuit(3)) {
        prop_assert!(c.matrix_of().unwrap().is_unitary(1e-9));
    }

    #[test]
    fn hadamard_twice_restores_basis(n in 1usize..6, idx in 0usize..32, q in 0usize..6) {
        let idx = idx % (1 << n);
        let q = q % n;
        let mut s = StateVector::basis(n, idx).unwrap();
        let mut c = Circuit::new(n).unwrap();
        c.h(q).h(q);
        c.run(&mut s).unwrap();
        for (i, a) in s.amplitudes().iter().enumerate() {
            let want = if i == idx { 1.0 } else { 0.0 };
            prop_assert!((a - Complex::new(want, 0.0)).norm() < 1e-12);
        }
    }
}

use proptest::prelude::*;

use arthurlab::geometry::{closure_compare, partition_from_triangle, rank_entry_closed_form, rank_triangles};
use arthurlab::halfint::HalfInt;
use arthurlab::ldata::{insert_segments, reduce_lower, reduce_upper, remove_segments, LanglandsData, Segment, TemperedEntry};
use arthurlab::multisegments::{e_minus, e_plus_lower, e_plus_upper, e_rho_minus, move_row, psi_of_ems, Ems, ExtSegment, Mode};
use arthurlab::operators::{apply, dual_transport, enumerate_lowering, enumerate_raising};
use arthurlab::orders::{compare, dominance_compare, OrderKind, OrderResult, Partition};
use arthurlab::params::{
    dual_psi, extremal_parameters_of_lambda, infinitesimal_of, partitions_of, phi_of, validate_parameter,
};
use arthurlab::{ArthurParam, ArthurSummand, GroupSpec, Rho, SelfDualType};

fn labels() -> [Rho; 3] {
    [Rho::trivial(), Rho::new("sp", 2, SelfDualType::Symplectic), Rho::new("ot", 2, SelfDualType::Orthogonal)]
}

/// Good-parity parameters of standard dimension at most 30.
fn good_psi() -> impl Strategy<Value = ArthurParam> {
    (any::<bool>(), prop::collection::vec((0usize..3, 1u32..=6, 1u32..=6), 1..=5)).prop_filter_map(
        "dimension too large",
        |(sp, raw)| {
            let want = if sp { SelfDualType::Orthogonal } else { SelfDualType::Symplectic };
            let mut out: Vec<ArthurSummand> = raw
                .into_iter()
                .map(|(k, a, b)| {
                    let rho = labels()[k].clone();
                    let mut s = ArthurSummand::new(rho, a, b);
                    if s.self_dual_type() != want {
                        s.b = if b < 6 { b + 1 } else { b - 1 };
                    }
                    s
                })
                .collect();
            let mut dim: u64 = out.iter().map(ArthurSummand::dim).sum();
            if sp && dim.is_multiple_of(2) {
                out.push(ArthurSummand::new(Rho::trivial(), 1, 1));
                dim += 1;
            }
            if dim > 30 {
                return None;
            }
            let group = if sp { GroupSpec::sp(((dim - 1) / 2) as u32) } else { GroupSpec::so((dim / 2) as u32) };
            Some(ArthurParam::new(group, out))
        },
    )
}

fn lambda(p: &ArthurParam) -> arthurlab::params::Infinitesimal {
    infinitesimal_of(&phi_of(p))
}

proptest! {
    #[test]
    fn generated_parameters_are_valid(p in good_psi()) {
        let r = validate_parameter(&p);
        prop_assert!(r.good_parity && r.dimension_ok, "{}", p);
    }

    #[test]
    fn dual_is_an_involution_swapping_partitions(p in good_psi()) {
        let d = dual_psi(&p);
        prop_assert_eq!(dual_psi(&d), p.clone());
        let (pa, pd) = partitions_of(&p);
        prop_assert_eq!(partitions_of(&d), (pd, pa));
        prop_assert_eq!(lambda(&d), lambda(&p));
    }

    #[test]
    fn raising_moves_go_up_in_every_order(p in good_psi()) {
        for (op, r) in enumerate_raising(&p) {
            prop_assert!(op.kind.is_raising());
            prop_assert_eq!(lambda(&r), lambda(&p));
            prop_assert!(validate_parameter(&r).good_parity, "{} -> {}", op, r);
            prop_assert_eq!(
                dominance_compare(&partitions_of(&p).0, &partitions_of(&r).0).unwrap(),
                OrderResult::Greater
            );
            let c = closure_compare(&phi_of(&r), &phi_of(&p)).unwrap();
            prop_assert!(c.is_ge(), "{} on {}: {:?}", op, p, c);
            prop_assert!(compare(&r, &p, OrderKind::D).unwrap().is_ge());
            prop_assert_eq!(compare(&r, &p, OrderKind::A).unwrap(), OrderResult::Greater);
        }
    }

    #[test]
    fn moves_are_undone_by_their_inverse(p in good_psi()) {
        for (op, r) in enumerate_raising(&p).into_iter().chain(enumerate_lowering(&p)) {
            let fwd = apply(&p, &op);
            prop_assert!(!fwd.identity);
            prop_assert_eq!(&fwd.result, &r);
            let back = apply(&r, &op.inverse());
            prop_assert!(!back.identity, "{} then {}", op, op.inverse());
            prop_assert_eq!(back.result, p.clone());
        }
    }

    #[test]
    fn duality_transports_raising_moves(p in good_psi()) {
        for (op, r) in enumerate_raising(&p) {
            let t = dual_transport(&op).unwrap();
            prop_assert!(t.kind.is_raising());
            prop_assert_eq!(dual_transport(&t).unwrap().kind, op.kind);
            let out = apply(&dual_psi(&r), &t);
            prop_assert!(!out.identity, "{} -> {}", op, t);
            prop_assert_eq!(out.result, dual_psi(&p));
        }
    }

    #[test]
    fn closure_order_implies_partition_order(p in good_psi(), q in good_psi()) {
        for (x, y) in [(p.clone(), q.clone()), (p.clone(), dual_psi(&p))] {
            if x.group() != y.group() || lambda(&x) != lambda(&y) {
                continue;
            }
            if closure_compare(&phi_of(&x), &phi_of(&y)).unwrap() == OrderResult::Greater {
                prop_assert!(compare(&x, &y, OrderKind::D).unwrap().is_ge());
            }
        }
    }

    #[test]
    fn open_and_zero_parameters_sandwich(p in good_psi()) {
        let (open, zero) = extremal_parameters_of_lambda(&p);
        prop_assert_eq!(lambda(&open), lambda(&p));
        prop_assert!(closure_compare(&phi_of(&open), &phi_of(&p)).unwrap().is_ge());
        prop_assert!(closure_compare(&phi_of(&p), &phi_of(&zero)).unwrap().is_ge());
    }

    #[test]
    fn triangles_recover_block_partitions(p in good_psi()) {
        let phi = phi_of(&p);
        for (rho, (_, tri)) in rank_triangles(&phi).unwrap() {
            let sizes: Vec<u32> = phi.summands().iter().filter(|s| s.rho == rho).map(|s| s.a).collect();
            let n: u64 = sizes.iter().map(|&a| a as u64).sum();
            prop_assert_eq!(partition_from_triangle(&tri, n).unwrap(), Partition::new(sizes));
        }
    }

    #[test]
    fn closed_form_matches_triangle_and_count(a in 1u32..=8, b in 1u32..=8) {
        let s = ArthurSummand::new(Rho::trivial(), a, b);
        let p = ArthurParam::new(GroupSpec::so(0), vec![s.clone()]);
        let tris = rank_triangles(&phi_of(&p)).unwrap();
        let (grid, tri) = &tris[&Rho::trivial()];
        let (big_a, big_b) = (s.A(), s.B());
        for alpha in 1..grid.len() {
            for beta in alpha..grid.len() {
                let (lo, hi) = (grid[alpha - 1], grid[beta]);
                // φ of the summand is |.|^{(A-B)/2 - t} ⊗ S_{A+B+1} covering [-B-t, A-t]
                let brute = (0..=(big_a - big_b).floor()).filter(|&t| big_a - t >= hi && -big_b - t <= lo).count() as u64;
                prop_assert_eq!(tri.get(alpha, beta) as u64, brute);
                prop_assert_eq!(rank_entry_closed_form(big_a, big_b, hi, lo), brute);
            }
        }
    }
}

/// A single-label block in `(P')` order whose group matches its dimension.
fn block_ems() -> impl Strategy<Value = Ems> {
    (any::<bool>(), prop::collection::vec((0i64..=8, 0i64..=4, any::<u8>(), any::<bool>()), 1..=5)).prop_map(
        |(half, raw)| {
            let off = if half { 1 } else { 0 };
            let mut rows: Vec<ExtSegment> = raw
                .into_iter()
                .map(|(a, w, lpick, pos)| {
                    let a2 = 2 * a + off;
                    let b2 = (a2 - 2 * w).max(-a2);
                    let width = (a2 - b2) / 2 + 1;
                    let l = (lpick as i64) % (width / 2 + 1);
                    ExtSegment::new(HalfInt::half(a2), HalfInt::half(b2), l, if pos { 1 } else { -1 })
                })
                .collect();
            rows.sort_by_key(|p| (p.B, p.A));
            let dim: u64 = rows.iter().map(|r| ((r.A + r.B + 1).floor() * r.width()) as u64).sum();
            let group = if dim % 2 == 1 { GroupSpec::sp(((dim - 1) / 2) as u32) } else { GroupSpec::so((dim / 2) as u32) };
            Ems::single(group, Rho::trivial(), rows)
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2048))]

    #[test]
    fn add_keeps_sign_and_shifts_b(e in block_ems(), j in 0usize..5, d in -2i64..=2) {
        let rows = e.block(&Rho::trivial());
        let r = &rows[j % rows.len()];
        if let Ok(Some(out)) = move_row(r, d, Mode::Add) {
            prop_assert_eq!(out.sign_factor(), r.sign_factor());
            let s = r.summand(&Rho::trivial()).unwrap();
            let t = out.summand(&Rho::trivial()).unwrap();
            prop_assert_eq!((t.a, t.b as i64), (s.a, s.b as i64 + 2 * d));
        }
    }

    #[test]
    fn e_minus_trims_r_summands(e in block_ems()) {
        if let Ok(out) = e_minus(&e, &Rho::trivial()) {
            let before = psi_of_ems(&e);
            let after = psi_of_ems(&out.ems);
            let rho = Rho::trivial();
            let s = ArthurSummand::from_ab(rho.clone(), out.removed.y, out.removed.x).unwrap();
            let mut want: Vec<ArthurSummand> = before.summands().to_vec();
            for _ in 0..out.r {
                let pos = want.iter().position(|t| *t == s).unwrap();
                want.remove(pos);
                if s.b > 2 {
                    want.push(ArthurSummand::new(rho.clone(), s.a, s.b - 2));
                }
            }
            want.sort();
            prop_assert_eq!(after.summands(), want.as_slice());
        }
    }

    #[test]
    fn upper_lift_is_undone_by_e_minus(e in block_ems(), x2 in -1i64..=8, gap in 1i64..=4, r in 1usize..=2) {
        let rho = Rho::trivial();
        let (x, y) = (HalfInt::half(x2), HalfInt::half(x2 + 2 * gap));
        if let Ok((plus, _)) = e_plus_upper(&e, &rho, x, y, r) {
            let back = e_minus(&plus, &rho).unwrap();
            prop_assert_eq!(back.ems, e);
            prop_assert_eq!(back.removed, Segment::new(rho, x, y));
            prop_assert_eq!(back.r, r);
        }
    }

    #[test]
    fn lower_lift_is_undone_by_e_rho_minus(e in block_ems(), x2 in -1i64..=8, ys in prop::collection::vec(1i64..=4, 1..=3)) {
        let rho = Rho::trivial();
        let x = HalfInt::half(x2);
        let mut removed: Vec<Segment> = ys.iter().map(|&g| Segment::new(rho.clone(), x, x + g)).collect();
        if let Ok(plus) = e_plus_lower(&e, &rho, &removed) {
            let (back, mut gone) = e_rho_minus(&plus, &rho).unwrap();
            prop_assert_eq!(back, e);
            gone.sort();
            removed.sort();
            prop_assert_eq!(gone, removed);
        }
    }
}

fn ldata() -> impl Strategy<Value = LanglandsData> {
    prop::collection::vec((-6i64..=6, 1i64..=6), 1..=5).prop_map(|raw| {
        let segs = raw
            .into_iter()
            .map(|(x2, gap)| {
                // x + y ∈ ℤ≥0 and x < y
                let y2 = (x2 + 2 * gap).max(-x2 + 2 * (gap % 2)).max(x2 + 2);
                let y2 = if (x2 + y2) % 2 != 0 { y2 + 1 } else { y2 };
                Segment::new(Rho::trivial(), HalfInt::half(x2), HalfInt::half(y2))
            })
            .collect();
        LanglandsData::new(segs, vec![TemperedEntry { rho: Rho::trivial(), a: 1, sign: 1 }]).unwrap()
    })
}

proptest! {
    #[test]
    fn reductions_are_undone_by_insertion(pi in ldata()) {
        let up = reduce_upper(&pi, None).unwrap();
        prop_assert!(up.r >= 1);
        let removed = vec![Segment::new(up.rho.clone(), up.x, up.y); up.r];
        prop_assert_eq!(insert_segments(&up.pi_minus, &removed).unwrap(), pi.clone());
        prop_assert_eq!(remove_segments(&pi, &removed).unwrap(), up.pi_minus);
        let low = reduce_lower(&pi, None).unwrap();
        prop_assert!(low.removed.iter().all(|s| s.x == low.x_min));
        prop_assert!(low.pi_minus.segments().iter().all(|s| s.x > low.x_min));
        prop_assert_eq!(insert_segments(&low.pi_minus, &low.removed).unwrap(), pi);
    }
}

proptest! {
    #[test]
    fn text_forms_round_trip(n in -400i64..=400, p in good_psi()) {
        let h = HalfInt::half(n);
        prop_assert_eq!(h.to_string().parse::<HalfInt>().unwrap(), h);
        for (op, _) in enumerate_raising(&p).into_iter().chain(enumerate_lowering(&p)) {
            let back: arthurlab::OperatorDescriptor = op.to_string().parse().unwrap();
            prop_assert_eq!(back, op);
        }
    }
}

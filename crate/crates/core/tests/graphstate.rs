use entangle_core::graphstate::{
    convex_combine, EditAction, GraphKind, GraphOp, PartitionSpec, PsdVerdict, WeightedGraph,
};
use entangle_core::numcore::{self, CMatrix, Dims};
use entangle_core::state::{self, DensityMatrix, PureState};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn real_matrix(rows: &[&[f64]], scale: f64) -> CMatrix {
    let n = rows.len();
    CMatrix::from_fn(n, n, |i, j| c(rows[i][j] * scale, 0.0))
}

fn close(a: &CMatrix, b: &CMatrix, tol: f64) -> bool {
    a.shape() == b.shape() && numcore::max_abs(&(a - b)) <= tol
}

fn path(n: usize) -> WeightedGraph {
    let mut g = WeightedGraph::with_vertices(GraphKind::Real, n).unwrap();
    for v in 0..n - 1 {
        g.set_edge_real(v, v + 1, 1.0).unwrap();
    }
    g
}

/// Random real graph with positive edges and nonnegative loops (always PSD).
fn random_real_graph(rng: &mut StdRng, n: usize) -> WeightedGraph {
    let mut g = WeightedGraph::with_vertices(GraphKind::Real, n).unwrap();
    for u in 0..n {
        for v in u + 1..n {
            if rng.random_bool(0.6) {
                g.set_edge_real(u, v, rng.random_range(0.1..2.0)).unwrap();
            }
        }
        if rng.random_bool(0.5) {
            g.set_loop(u, rng.random_range(0.1..2.0)).unwrap();
        }
    }
    if g.degree_sum() == 0.0 {
        g.set_loop(0, 1.0).unwrap();
    }
    g
}

/// Random complex graph built from a random mixed state.
fn random_complex_graph(rng: &mut StdRng, d: usize) -> WeightedGraph {
    let rho = state::random_mixed(&Dims::new(vec![d]).unwrap(), 2, rng);
    WeightedGraph::from_density(&rho, GraphKind::Complex).unwrap()
}

#[test]
fn k2_laplacian_and_projector() {
    let mut g = WeightedGraph::with_vertices(GraphKind::Real, 2).unwrap();
    g.set_edge_real(0, 1, 1.0).unwrap();
    assert!(close(
        &g.laplacian(),
        &real_matrix(&[&[1.0, -1.0], &[-1.0, 1.0]], 1.0),
        0.0
    ));
    assert!(g.is_pure().unwrap());
    let terms = g.projector_decomposition();
    assert_eq!(terms.len(), 1);
    assert!((terms[0].0 - 2.0).abs() < 1e-12);
    let h = std::f64::consts::FRAC_1_SQRT_2;
    assert!((terms[0].1[0] - c(h, 0.0)).norm() < 1e-12);
    assert!((terms[0].1[1] - c(-h, 0.0)).norm() < 1e-12);
}

#[test]
fn single_loop_laplacian_is_diagonal() {
    let mut g = WeightedGraph::with_vertices(GraphKind::Real, 3).unwrap();
    g.set_loop(0, 2.5).unwrap();
    let mut want = CMatrix::zeros(3, 3);
    want[(0, 0)] = c(2.5, 0.0);
    assert!(close(&g.laplacian(), &want, 0.0));
}

#[test]
fn k4_with_two_loops() {
    let mut g = WeightedGraph::with_vertices(GraphKind::Real, 4).unwrap();
    for u in 0..4 {
        for v in u + 1..4 {
            g.set_edge_real(u, v, 1.0).unwrap();
        }
    }
    g.set_loop(0, 1.0).unwrap();
    g.set_loop(1, 1.0).unwrap();
    let want = real_matrix(
        &[
            &[4.0, -1.0, -1.0, -1.0],
            &[-1.0, 4.0, -1.0, -1.0],
            &[-1.0, -1.0, 3.0, -1.0],
            &[-1.0, -1.0, -1.0, 3.0],
        ],
        1.0 / 14.0,
    );
    assert!(close(g.density().unwrap().matrix(), &want, 1e-15));
}

#[test]
fn imaginary_edge_is_a_y_eigenstate() {
    let mut g = WeightedGraph::with_vertices(GraphKind::Complex, 2).unwrap();
    g.set_edge(0, 1, c(0.0, -1.0)).unwrap();
    let want = CMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(1.0, 0.0)]);
    assert!(close(&g.laplacian(), &want, 0.0));
    let y_plus = PureState::new(
        numcore::CVector::from_vec(vec![c(1.0, 0.0), c(0.0, 1.0)]) / c(2f64.sqrt(), 0.0),
        Dims::new(vec![2]).unwrap(),
    )
    .unwrap();
    assert!(close(
        g.density().unwrap().matrix(),
        y_plus.to_density().matrix(),
        1e-15
    ));
}

#[test]
fn two_qubit_y_plus_graph() {
    let rho = CMatrix::from_row_slice(
        4,
        4,
        &[
            c(1.0, 0.0),
            c(0.0, -1.0),
            c(0.0, -1.0),
            c(-1.0, 0.0),
            c(0.0, 1.0),
            c(1.0, 0.0),
            c(1.0, 0.0),
            c(0.0, -1.0),
            c(0.0, 1.0),
            c(1.0, 0.0),
            c(1.0, 0.0),
            c(0.0, -1.0),
            c(-1.0, 0.0),
            c(0.0, 1.0),
            c(0.0, 1.0),
            c(1.0, 0.0),
        ],
    ) * c(0.25, 0.0);
    let rho = DensityMatrix::new(rho, Dims::qubits(2).unwrap()).unwrap();
    let g = WeightedGraph::from_density(&rho, GraphKind::Complex).unwrap();
    assert!(g.is_pure().unwrap());
    let mut sum = CMatrix::zeros(4, 4);
    for (w, v) in g.projector_decomposition() {
        sum += numcore::outer(&v, &v) * c(w, 0.0);
    }
    assert!(close(&(sum / c(g.degree_sum(), 0.0)), rho.matrix(), 1e-12));
}

#[test]
fn from_density_examples() {
    let plus = DensityMatrix::new(
        real_matrix(&[&[1.0, 1.0], &[1.0, 1.0]], 0.5),
        Dims::new(vec![2]).unwrap(),
    )
    .unwrap();
    let g = WeightedGraph::from_density(&plus, GraphKind::Real).unwrap();
    assert_eq!(g.num_edges(), 1);
    assert!((g.weight(0, 1).re + 0.5).abs() < 1e-15);
    assert_eq!(g.degrees(), vec![0.5, 0.5]);

    let mixed = DensityMatrix::maximally_mixed(Dims::qubits(2).unwrap());
    let g = WeightedGraph::from_density(&mixed, GraphKind::Real).unwrap();
    assert_eq!(g.num_edges(), 0);
    assert_eq!(g.loops().count(), 4);
}

#[test]
fn random_two_qubit_states_round_trip() {
    let mut rng = StdRng::seed_from_u64(11);
    let dims = Dims::qubits(2).unwrap();
    for i in 0..100 {
        let rho = state::random_mixed(&dims, 1 + i % 4, &mut rng);
        let g = WeightedGraph::from_density(&rho, GraphKind::Complex).unwrap();
        assert!(close(g.density().unwrap().matrix(), rho.matrix(), 1e-10));
    }
}

#[test]
fn purity_test_cases() {
    let mut g = WeightedGraph::with_vertices(GraphKind::Real, 2).unwrap();
    g.set_loop(0, 1.0).unwrap();
    g.set_loop(1, 1.0).unwrap();
    assert!(!g.is_pure().unwrap());

    let r = 3.0 + 4.0 * 2f64.sqrt();
    let i = |x: f64| c(0.0, x);
    let m = CMatrix::from_row_slice(
        4,
        4,
        &[
            c(7.0, 0.0),
            i(-r),
            i(-7.0),
            c(-r, 0.0),
            i(r),
            c(11.0, 0.0),
            c(r, 0.0),
            i(-11.0),
            i(7.0),
            c(r, 0.0),
            c(7.0, 0.0),
            i(-r),
            c(-r, 0.0),
            i(11.0),
            i(r),
            c(11.0, 0.0),
        ],
    ) / c(36.0, 0.0);
    let g = WeightedGraph::from_laplacian(&(m * c(36.0, 0.0)), GraphKind::Complex, vec![2, 2]).unwrap();
    assert!(!g.is_pure().unwrap());
}

#[test]
fn convex_combination_of_plus_plus_and_mixture() {
    let dims = Dims::qubits(2).unwrap();
    let g1 = WeightedGraph::from_density(
        &DensityMatrix::new(CMatrix::from_element(4, 4, c(0.25, 0.0)), dims.clone()).unwrap(),
        GraphKind::Real,
    )
    .unwrap();
    let g2 = WeightedGraph::from_density(
        &DensityMatrix::new(
            real_matrix(
                &[
                    &[2.0, 0.0, 0.0, 0.0],
                    &[0.0, 1.0, 1.0, 0.0],
                    &[0.0, 1.0, 1.0, 0.0],
                    &[0.0, 0.0, 0.0, 0.0],
                ],
                0.25,
            ),
            dims.clone(),
        )
        .unwrap(),
        GraphKind::Real,
    )
    .unwrap();
    let g = convex_combine(&[g1.clone(), g2], &[1.0 / 3.0, 2.0 / 3.0]).unwrap();
    let want = real_matrix(
        &[
            &[5.0, 1.0, 1.0, 1.0],
            &[1.0, 3.0, 3.0, 1.0],
            &[1.0, 3.0, 3.0, 1.0],
            &[1.0, 1.0, 1.0, 1.0],
        ],
        1.0 / 12.0,
    );
    assert!(close(g.density().unwrap().matrix(), &want, 1e-12));

    let same = convex_combine(&[g1.clone(), g1.clone()], &[0.5, 0.5]).unwrap();
    assert!(close(
        same.density().unwrap().matrix(),
        g1.density().unwrap().matrix(),
        1e-12
    ));
    assert!(convex_combine(&[g1.clone(), g1], &[0.5, 0.6]).is_err());
}

#[test]
fn disjoint_union_adds_laplacians() {
    let mut rng = StdRng::seed_from_u64(5);
    let a = random_real_graph(&mut rng, 4);
    let b = random_real_graph(&mut rng, 4);
    let u = a.union(&b).unwrap();
    assert!(close(&u.laplacian(), &(a.laplacian() + b.laplacian()), 1e-12));
}

#[test]
fn tracing_out_second_qubit() {
    let sigma = real_matrix(
        &[
            &[9.0, -1.0, -1.0, 1.0],
            &[-1.0, 3.0, -1.0, -1.0],
            &[-1.0, -1.0, 3.0, -1.0],
            &[1.0, -1.0, -1.0, 1.0],
        ],
        1.0,
    );
    let g = WeightedGraph::from_laplacian(&sigma, GraphKind::Real, vec![2, 2]).unwrap();
    let reduced = g.trace_out(&[2]).unwrap();
    let want = real_matrix(&[&[6.0, -1.0], &[-1.0, 2.0]], 1.0 / 8.0);
    assert!(close(reduced.density().unwrap().matrix(), &want, 1e-15));
}

#[test]
fn trace_out_agrees_with_partial_trace() {
    let mut rng = StdRng::seed_from_u64(8);
    let dims = Dims::new(vec![2, 3]).unwrap();
    for _ in 0..20 {
        let rho = state::random_mixed(&dims, 3, &mut rng);
        let g = WeightedGraph::from_density(&rho, GraphKind::Complex).unwrap();
        let traced = g.trace_out(&[2]).unwrap().density().unwrap();
        assert!(close(traced.matrix(), rho.reduce(&[1]).unwrap().matrix(), 1e-10));
    }
}

#[test]
fn entropy_values() {
    let mut loops = WeightedGraph::with_vertices(GraphKind::Real, 4).unwrap();
    for v in 0..4 {
        loops.set_loop(v, 0.7).unwrap();
    }
    assert!((loops.von_neumann_entropy().unwrap() - 2.0).abs() < 1e-12);
    assert!(path(2).von_neumann_entropy().unwrap().abs() < 1e-12);

    let mut half = WeightedGraph::with_vertices(GraphKind::Real, 2).unwrap();
    half.set_loop(0, 1.0).unwrap();
    half.set_loop(1, 1.0).unwrap();
    let prod = half.modified_tensor_product(&path(2)).unwrap();
    assert!((prod.von_neumann_entropy().unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn operators_match_laplacian_pieces() {
    let mut rng = StdRng::seed_from_u64(3);
    let g = random_real_graph(&mut rng, 5);
    let q = g.laplacian();
    let diag = |m: &CMatrix| CMatrix::from_diagonal(&m.diagonal());
    let loops = CMatrix::from_diagonal(&numcore::CVector::from_iterator(
        5,
        (0..5).map(|v| c(g.loop_weight(v), 0.0)),
    ));
    assert!(close(&g.apply(GraphOp::Eta).laplacian(), &(-q.clone()), 1e-12));
    assert!(close(&g.apply(GraphOp::L).laplacian(), &(q.clone() - &loops), 1e-12));
    assert!(close(&g.apply(GraphOp::N).laplacian(), &diag(&q), 1e-12));
    assert!(close(&g.apply(GraphOp::Omega).laplacian(), &loops, 1e-12));
    assert!(close(&g.apply(GraphOp::NL).laplacian(), &(diag(&q) - &loops), 1e-12));
    assert_eq!(path(3).apply(GraphOp::Omega).num_edges(), 0);
    assert_eq!(path(3).apply(GraphOp::Omega).loops().count(), 0);
}

#[test]
fn path_product_matches_printed_matrix() {
    let rows: [[f64; 8]; 8] = [
        [1.0, -1.0, 0.0, 0.0, -1.0, 1.0, 0.0, 0.0],
        [-1.0, 2.0, -1.0, 0.0, 1.0, -2.0, 1.0, 0.0],
        [0.0, -1.0, 2.0, -1.0, 0.0, 1.0, -2.0, 1.0],
        [0.0, 0.0, -1.0, 1.0, 0.0, 0.0, 1.0, -1.0],
        [-1.0, 1.0, 0.0, 0.0, 1.0, -1.0, 0.0, 0.0],
        [1.0, -2.0, 1.0, 0.0, -1.0, 2.0, -1.0, 0.0],
        [0.0, 1.0, -2.0, 1.0, 0.0, -1.0, 2.0, -1.0],
        [0.0, 0.0, 1.0, -1.0, 0.0, 0.0, -1.0, 1.0],
    ];
    let want = CMatrix::from_fn(8, 8, |i, j| c(rows[i][j] / 12.0, 0.0));
    let g = path(2).modified_tensor_product(&path(4)).unwrap();
    assert!(close(g.density().unwrap().matrix(), &want, 1e-15));
    let kron = numcore::kron(path(2).density().unwrap().matrix(), path(4).density().unwrap().matrix());
    assert!(close(&kron, &want, 1e-15));
}

#[test]
fn unit_loop_is_a_product_identity() {
    let mut one = WeightedGraph::with_vertices(GraphKind::Real, 1).unwrap();
    one.set_loop(0, 1.0).unwrap();
    let g = path(3);
    assert!(close(
        &g.modified_tensor_product(&one).unwrap().laplacian(),
        &g.laplacian(),
        1e-15
    ));
}

#[test]
fn modified_product_of_random_pairs_is_kronecker() {
    let mut rng = StdRng::seed_from_u64(2024);
    for i in 0..25 {
        let (g, h) = (
            random_real_graph(&mut rng, 2 + i % 3),
            random_real_graph(&mut rng, 2 + i % 2),
        );
        let p = g.modified_tensor_product(&h).unwrap();
        let want = numcore::kron(g.density().unwrap().matrix(), h.density().unwrap().matrix());
        assert!(close(p.density().unwrap().matrix(), &want, 1e-12));
    }
    for i in 0..25 {
        let (g, h) = (
            random_complex_graph(&mut rng, 2 + i % 3),
            random_complex_graph(&mut rng, 2),
        );
        let p = g.modified_tensor_product(&h).unwrap();
        let want = numcore::kron(g.density().unwrap().matrix(), h.density().unwrap().matrix());
        assert!(close(p.density().unwrap().matrix(), &want, 1e-12));
    }
}

#[test]
fn modified_product_is_associative_and_distributive() {
    let mut rng = StdRng::seed_from_u64(77);
    let (a, b, k) = (
        random_real_graph(&mut rng, 2),
        random_real_graph(&mut rng, 3),
        random_real_graph(&mut rng, 2),
    );
    let left = a
        .modified_tensor_product(&b)
        .unwrap()
        .modified_tensor_product(&k)
        .unwrap();
    let right = a
        .modified_tensor_product(&b.modified_tensor_product(&k).unwrap())
        .unwrap();
    assert!(close(&left.laplacian(), &right.laplacian(), 1e-12));

    let b2 = random_real_graph(&mut rng, 3);
    let dist = a.modified_tensor_product(&b.union(&b2).unwrap()).unwrap();
    let sum = a.modified_tensor_product(&b).unwrap().laplacian() + a.modified_tensor_product(&b2).unwrap().laplacian();
    assert!(close(&dist.laplacian(), &sum, 1e-12));
}

#[test]
fn mismatched_kinds_are_rejected() {
    let real = path(2);
    let complex = WeightedGraph::with_vertices(GraphKind::Complex, 2).unwrap();
    assert!(real.modified_tensor_product(&complex).is_err());
}

#[test]
fn cartesian_products() {
    let k2 = path(2);
    let sq = k2.cartesian_product(&k2).unwrap();
    assert_eq!(sq.num_edges(), 4);
    assert!(!sq.has_edge(0, 3) && !sq.has_edge(1, 2));
    let lone = WeightedGraph::with_vertices(GraphKind::Real, 1).unwrap();
    let empty = lone.cartesian_product(&k2).unwrap();
    assert_eq!(empty.num_edges(), 0);
    assert_eq!(empty.loops().count(), 0);
}

#[test]
fn relabelling_permutes_the_laplacian() {
    let mut rng = StdRng::seed_from_u64(9);
    let g = random_real_graph(&mut rng, 4);
    let perm = [2, 0, 3, 1];
    let r = g.relabel(&perm).unwrap();
    let q = g.laplacian();
    for u in 0..4 {
        for v in 0..4 {
            assert!((r.laplacian()[(perm[u], perm[v])] - q[(u, v)]).norm() < 1e-15);
        }
    }
    let mut a = numcore::hermitian_eigenvalues(&q).unwrap();
    let mut b = numcore::hermitian_eigenvalues(&r.laplacian()).unwrap();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    for (x, y) in a.iter().zip(&b) {
        assert!((x - y).abs() < 1e-12);
    }
}

#[test]
fn loopless_laplacian_kernel_counts_components() {
    let mut g = path(3)
        .union(&WeightedGraph::with_vertices(GraphKind::Real, 3).unwrap())
        .unwrap();
    g = {
        let mut h = WeightedGraph::with_vertices(GraphKind::Real, 6).unwrap();
        for ((u, v), w) in g.edges() {
            h.set_edge(u, v, w).unwrap();
        }
        h.set_edge_real(3, 4, 2.0).unwrap();
        h
    };
    let zeros = numcore::hermitian_eigenvalues(&g.laplacian())
        .unwrap()
        .iter()
        .filter(|x| x.abs() < 1e-10)
        .count();
    assert!(zeros >= 3);
}

#[test]
fn partial_transpose_is_an_involution_and_matches_matrix() {
    let mut rng = StdRng::seed_from_u64(31);
    let dims = Dims::new(vec![2, 2, 2]).unwrap();
    for _ in 0..10 {
        let rho = state::random_mixed(&dims, 2, &mut rng);
        let g = WeightedGraph::from_density(&rho, GraphKind::Complex).unwrap();
        for cut in PartitionSpec::all_cuts(3) {
            let pt = g.partial_transpose(&cut).unwrap();
            let back = pt.partial_transpose(&cut).unwrap();
            assert!(close(&back.laplacian(), &g.laplacian(), 1e-12));
            let m = numcore::partial_transpose(&(rho.matrix() * c(g.degree_sum(), 0.0)), &dims, cut.s()).unwrap();
            let q = pt.laplacian();
            for i in 0..8 {
                for j in 0..8 {
                    if i != j {
                        assert!((q[(i, j)] - m[(i, j)]).norm() < 1e-10);
                    }
                }
            }
        }
    }
}

#[test]
fn shared_side_edges_are_fixed_points() {
    let mut g = WeightedGraph::new(GraphKind::Real, vec![2, 2]).unwrap();
    g.set_edge_real(0, 1, 1.0).unwrap();
    let cut = PartitionSpec::new(&[1], 2).unwrap();
    let pt = g.partial_transpose(&cut).unwrap();
    assert!(pt.has_edge(0, 1));
    assert_eq!(pt.num_edges(), 1);
}

fn counterexample() -> DensityMatrix {
    let m = CMatrix::from_row_slice(
        4,
        4,
        &[
            c(2.0, 0.0),
            c(1.0, 1.0),
            c(1.0, 1.0),
            c(0.0, 0.0),
            c(1.0, -1.0),
            c(2.0, 0.0),
            c(2.0, 0.0),
            c(1.0, 1.0),
            c(1.0, -1.0),
            c(2.0, 0.0),
            c(2.0, 0.0),
            c(1.0, 1.0),
            c(0.0, 0.0),
            c(1.0, -1.0),
            c(1.0, -1.0),
            c(2.0, 0.0),
        ],
    ) / c(8.0, 0.0);
    DensityMatrix::new(m, Dims::qubits(2).unwrap()).unwrap()
}

#[test]
fn separable_mixed_state_can_fail_the_degree_criterion() {
    let rho = counterexample();
    // Built as an explicit mixture of two product states.
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let y_minus = numcore::CVector::from_vec(vec![c(h, 0.0), c(0.0, -h)]);
    let x_plus = numcore::CVector::from_vec(vec![c(h, 0.0), c(h, 0.0)]);
    let a = PureState::product(&[y_minus.clone(), y_minus]).unwrap().to_density();
    let b = PureState::product(&[x_plus.clone(), x_plus]).unwrap().to_density();
    let mix = (a.matrix() + b.matrix()) * c(0.5, 0.0);
    assert!(close(&mix, rho.matrix(), 1e-15));

    let g = WeightedGraph::from_density(&rho, GraphKind::Complex).unwrap();
    let cut = PartitionSpec::new(&[1], 2).unwrap();
    assert!(!g.degree_criterion(&cut).unwrap());
    assert!(!g.edge_set_closed(&cut).unwrap());
}

#[test]
fn ghz3_graph_fails_every_cut() {
    let g = WeightedGraph::from_density(&state::ghz(3, 2).unwrap().to_density(), GraphKind::Complex).unwrap();
    for cut in PartitionSpec::all_cuts(3) {
        assert!(!g.degree_criterion(&cut).unwrap(), "{cut}");
    }
}

#[test]
fn loopless_real_separable_mixtures_pass_the_degree_criterion() {
    // Mixtures of products of loopless real graphs stay loopless real graphs.
    let mut rng = StdRng::seed_from_u64(4);
    for _ in 0..10 {
        let mut terms = Vec::new();
        for _ in 0..3 {
            let mut a = WeightedGraph::with_vertices(GraphKind::Real, 2).unwrap();
            a.set_edge_real(0, 1, rng.random_range(0.2..1.5)).unwrap();
            let mut b = WeightedGraph::with_vertices(GraphKind::Real, 3).unwrap();
            b.set_edge_real(0, 1, rng.random_range(0.2..1.5)).unwrap();
            b.set_edge_real(1, 2, rng.random_range(0.2..1.5)).unwrap();
            let p = a.modified_tensor_product(&b).unwrap();
            terms.push(p.density().unwrap());
        }
        let mut m = CMatrix::zeros(6, 6);
        for t in &terms {
            m += t.matrix() / c(3.0, 0.0);
        }
        let rho = DensityMatrix::new(m, Dims::new(vec![2, 3]).unwrap()).unwrap();
        let g = WeightedGraph::from_density(&rho, GraphKind::Real).unwrap();
        assert_eq!(g.loops().count(), 0);
        assert!(g.degree_criterion(&PartitionSpec::new(&[1], 2).unwrap()).unwrap());
    }
}

#[test]
fn psd_screen_rules() {
    let mut phase = WeightedGraph::with_vertices(GraphKind::Complex, 3).unwrap();
    phase.set_edge(0, 1, Complex64::from_polar(1.0, 1.0)).unwrap();
    phase.set_edge(1, 2, Complex64::from_polar(2.0, -0.5)).unwrap();
    assert_eq!(phase.psd_screen(), PsdVerdict::Psd);

    let mut negative_loops = WeightedGraph::with_vertices(GraphKind::Real, 3).unwrap();
    for v in 0..3 {
        negative_loops.set_loop(v, -1.0).unwrap();
    }
    assert_eq!(negative_loops.psd_screen(), PsdVerdict::NotPsd);

    let mut tree = path(4);
    tree.set_edge_real(1, 2, -1.0).unwrap();
    assert_eq!(tree.psd_screen(), PsdVerdict::NotPsd);

    let mut zero_degree = WeightedGraph::with_vertices(GraphKind::Real, 3).unwrap();
    zero_degree.set_edge_real(0, 1, 1.0).unwrap();
    zero_degree.set_edge_real(1, 2, -1.0).unwrap();
    zero_degree.set_loop(2, 1.0).unwrap();
    assert_eq!(zero_degree.psd_screen(), PsdVerdict::NotPsd);
}

#[test]
fn psd_screen_never_contradicts_eigenvalues() {
    let mut rng = StdRng::seed_from_u64(99);
    for _ in 0..200 {
        let mut g = WeightedGraph::with_vertices(GraphKind::Real, 4).unwrap();
        for u in 0..4 {
            for v in u + 1..4 {
                if rng.random_bool(0.5) {
                    g.set_edge_real(u, v, rng.random_range(-1.0..2.0)).unwrap();
                }
            }
            if rng.random_bool(0.3) {
                g.set_loop(u, rng.random_range(-0.5..1.5)).unwrap();
            }
        }
        let psd = numcore::is_psd(&g.laplacian(), 1e-10).unwrap();
        match g.psd_screen() {
            PsdVerdict::Psd => assert!(psd),
            PsdVerdict::NotPsd => assert!(!psd),
            PsdVerdict::Unknown => {}
        }
    }
}

fn example_square() -> WeightedGraph {
    let mut g = WeightedGraph::with_vertices(GraphKind::Real, 4).unwrap();
    g.set_edge_real(0, 1, 1.0).unwrap();
    g.set_edge_real(0, 2, 1.0).unwrap();
    g.set_edge_real(0, 3, -1.0).unwrap();
    g.set_edge_real(1, 2, 1.0).unwrap();
    g.set_edge_real(1, 3, 1.0).unwrap();
    g.set_edge_real(2, 3, 1.0).unwrap();
    g
}

#[test]
fn deleting_a_positive_edge_compensates() {
    let g = example_square().edit_edge(0, 1, 1.0, EditAction::Delete).unwrap();
    let want = real_matrix(
        &[
            &[2.0, 0.0, -1.0, 1.0],
            &[0.0, 2.0, -1.0, -1.0],
            &[-1.0, -1.0, 3.0, -1.0],
            &[1.0, -1.0, -1.0, 3.0],
        ],
        0.1,
    );
    assert!(close(g.density().unwrap().matrix(), &want, 1e-15));
    assert!(example_square()
        .edit_edge(0, 1, 1.0, EditAction::Delete)
        .unwrap()
        .edit_edge(0, 1, 1.0, EditAction::Delete)
        .is_err());
}

#[test]
fn adding_edges_keeps_positivity() {
    let g = path(3);
    let d = g.degree_sum();
    let pos = g.edit_edge(0, 2, 0.5, EditAction::Add).unwrap();
    assert!(numcore::is_psd(&pos.laplacian(), 1e-12).unwrap());
    let a = -0.7;
    let neg = g.edit_edge(0, 2, a, EditAction::Add).unwrap();
    assert!(numcore::is_psd(&neg.laplacian(), 1e-12).unwrap());
    assert!((neg.degree_sum() - (d + 2.0 * a + 4.0 * a.abs())).abs() < 1e-12);
}

#[test]
fn pauli_observables() {
    let mut x = WeightedGraph::with_vertices(GraphKind::Real, 2).unwrap();
    x.set_edge_real(0, 1, -1.0).unwrap();
    x.set_loop(0, 1.0).unwrap();
    x.set_loop(1, 1.0).unwrap();
    let sx = CMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]);
    assert!(close(&x.observable(), &sx, 1e-15));

    let mut y = WeightedGraph::with_vertices(GraphKind::Complex, 2).unwrap();
    y.set_edge(0, 1, c(0.0, -1.0)).unwrap();
    y.set_loop(0, -1.0).unwrap();
    y.set_loop(1, -1.0).unwrap();
    let sy = CMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0)]);
    assert!(close(&y.observable(), &sy, 1e-15));

    let mut diag = WeightedGraph::with_vertices(GraphKind::Real, 2).unwrap();
    diag.set_loop(1, 3.0).unwrap();
    let o = diag.observable();
    assert_eq!(o[(0, 1)], c(0.0, 0.0));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn degree_criterion_iff_edge_closure(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let dims = Dims::new(vec![2, 2, 2]).unwrap();
        let psi = if rng.random_bool(0.5) {
            state::random_pure(&dims, &mut rng)
        } else {
            let a = state::random_pure(&Dims::new(vec![2]).unwrap(), &mut rng);
            let b = state::random_pure(&Dims::new(vec![2, 2]).unwrap(), &mut rng);
            a.tensor(&b)
        };
        let g = WeightedGraph::from_density(&psi.to_density(), GraphKind::Complex).unwrap();
        for cut in PartitionSpec::all_cuts(3) {
            prop_assert_eq!(g.degree_criterion(&cut).unwrap(), g.edge_set_closed(&cut).unwrap());
        }
    }
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>

#include "hegnn/dataset.hpp"
#include "hegnn/geomgraph.hpp"
#include "hegnn/groups.hpp"
#include "hegnn/rng.hpp"

using namespace hegnn;
using namespace hegnn::geom;
using specfun::O3Element;
using specfun::Parity;
using specfun::Rotation3;

TEST_CASE("kfold coordinates") {
    const GeometricGraph g4 = make_kfold(4);
    REQUIRE(g4.num_nodes() == 4);
    CHECK((g4.coords[0] - Vec3{1, 0, 0}).norm() < 1e-12);
    CHECK((g4.coords[1] - Vec3{0, 1, 0}).norm() < 1e-12);
    CHECK((g4.coords[2] - Vec3{-1, 0, 0}).norm() < 1e-12);
    CHECK((g4.coords[3] - Vec3{0, -1, 0}).norm() < 1e-12);

    const GeometricGraph g3 = make_kfold(3);
    for (int i = 0; i < 3; ++i) {
        const double a = 2.0 * 3.14159265358979323846 * i / 3.0;
        CHECK((g3.coords[i] - Vec3{std::cos(a), std::sin(a), 0}).norm() < 1e-12);
    }

    for (int k : {2, 3, 5, 10, 17}) {
        const GeometricGraph g = make_kfold(k);
        Vec3 mean{};
        for (const Vec3& c : g.coords) mean += c;
        CHECK(mean.norm() / k < 1e-12);
        CHECK(g.edges.size() == static_cast<size_t>(k) * (k - 1));
    }
    CHECK_THROWS_AS(make_kfold(1), Error);
}

TEST_CASE("polyhedra vertex counts and circumradius") {
    const std::pair<const char*, int> shapes[] = {
        {"tetrahedron", 4}, {"cube", 8}, {"octahedron", 6}, {"dodecahedron", 20}, {"icosahedron", 12}};
    for (const auto& [name, n] : shapes) {
        const GeometricGraph g = make_polyhedron(name);
        REQUIRE(g.num_nodes() == n);
        for (const Vec3& c : g.coords) CHECK(std::abs(c.norm() - 1.0) < 1e-12);
    }
    CHECK_THROWS_AS(make_polyhedron("teapot"), Error);
}

TEST_CASE("polyhedra admit witnesses for their full rotation groups") {
    const std::pair<const char*, const char*> pairs[] = {
        {"tetrahedron", "T"}, {"cube", "O"}, {"octahedron", "O"},
        {"dodecahedron", "I"}, {"icosahedron", "I"}};
    for (const auto& [shape, group] : pairs) {
        const GeometricGraph g = make_polyhedron(shape);
        const groups::FiniteGroup grp = groups::enumerate_group(group);
        for (const O3Element& e : grp.elements) CHECK(is_symmetric_under(g, e).has_value());
    }
    // All but the tetrahedron are centrally symmetric.
    CHECK(!is_symmetric_under(make_polyhedron("tetrahedron"), O3Element::inversion()).has_value());
    for (const char* shape : {"cube", "octahedron", "dodecahedron", "icosahedron"})
        CHECK(is_symmetric_under(make_polyhedron(shape), O3Element::inversion()).has_value());
}

TEST_CASE("kfold structures admit witnesses for their dihedral groups") {
    for (int k : {2, 3, 5, 10}) {
        const GeometricGraph g = make_kfold(k);
        const groups::FiniteGroup dk = groups::enumerate_group("D" + std::to_string(k));
        for (const O3Element& e : dk.elements) CHECK(is_symmetric_under(g, e).has_value());
        const bool inv = is_symmetric_under(g, O3Element::inversion()).has_value();
        CHECK(inv == (k % 2 == 0));
    }
}

TEST_CASE("witness permutation moves coordinates and respects adjacency") {
    const GeometricGraph cube = make_polyhedron("cube");
    const O3Element quarter{Rotation3::from_axis_angle({0, 0, 1}, 3.14159265358979323846 / 2.0), Parity::even};
    const auto witness = is_symmetric_under(cube, quarter);
    REQUIRE(witness.has_value());
    const Mat3 m = quarter.cartesian();
    for (int i = 0; i < cube.num_nodes(); ++i) {
        const Vec3 moved = m.apply(cube.coords[static_cast<size_t>(i)]);
        CHECK((moved - cube.coords[static_cast<size_t>(witness->permutation[static_cast<size_t>(i)])]).norm() < 1e-9);
    }

    const GeometricGraph five = make_kfold(5);
    const O3Element fifth{Rotation3::from_axis_angle({0, 0, 1}, 2.0 * 3.14159265358979323846 / 5.0), Parity::even};
    CHECK(is_symmetric_under(five, fifth).has_value());
}

TEST_CASE("generic point clouds have no nontrivial symmetry") {
    Rng rng(99);
    GeometricGraph g;
    g.node_scalars = Matrix(6, 1);
    for (int i = 0; i < 6; ++i) {
        g.node_scalars(i, 0) = 1.0;
        g.coords.push_back(rng.normal_vec3());
    }
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j)
            if (i != j) g.edges.push_back({i, j, {}});
    g.center();
    for (int t = 0; t < 10; ++t) {
        const O3Element e{random_rotation(1000 + static_cast<uint64_t>(t)), Parity::even};
        CHECK(!is_symmetric_under(g, e).has_value());
    }
}

TEST_CASE("random_rotation determinism and distribution") {
    const Rotation3 a = random_rotation(42);
    const Rotation3 b = random_rotation(42);
    CHECK(a.m.max_abs_diff(b.m) == 0.0);

    const Mat3 gram = a.m.transposed().mul(a.m);
    CHECK(gram.max_abs_diff(Mat3::identity()) < 1e-12);
    CHECK(std::abs(a.m.det() - 1.0) < 1e-12);

    // Haar expectation of the trace is 0.
    double mean_trace = 0.0;
    const int draws = 100000;
    for (int i = 0; i < draws; ++i) {
        const Rotation3 r = random_rotation(static_cast<uint64_t>(i));
        mean_trace += r.m(0, 0) + r.m(1, 1) + r.m(2, 2);
    }
    mean_trace /= draws;
    CHECK(std::abs(mean_trace) < 0.02);
}

TEST_CASE("perturb basics") {
    const GeometricGraph tetra = make_polyhedron("tetrahedron");
    const GeometricGraph same = perturb(tetra, 0.0, 7);
    for (int i = 0; i < 4; ++i) {
        CHECK(same.coords[static_cast<size_t>(i)].x == tetra.coords[static_cast<size_t>(i)].x);
        CHECK(same.coords[static_cast<size_t>(i)].y == tetra.coords[static_cast<size_t>(i)].y);
        CHECK(same.coords[static_cast<size_t>(i)].z == tetra.coords[static_cast<size_t>(i)].z);
    }
    CHECK_THROWS_AS(perturb(tetra, -0.1, 7), Error);

    // Noise at 1% of the radius breaks exact symmetry at tolerance 1e-6.
    const groups::FiniteGroup t = groups::enumerate_group("T");
    const GeometricGraph noisy = perturb(tetra, 0.01, 11);
    int surviving = 0;
    for (const O3Element& e : t.elements) {
        if (e.rotation.m.max_abs_diff(Mat3::identity()) < 1e-12) continue; // skip identity
        if (is_symmetric_under(noisy, e).has_value()) ++surviving;
    }
    CHECK(surviving == 0);
}

TEST_CASE("perturb displacement magnitude matches its sampling definition") {
    // Displacement = |N(0, sigma)| with sigma = eps * mean radius, so the
    // expected magnitude is sigma * sqrt(2/pi). Monte-Carlo over many nodes.
    const double eps = 0.05;
    const GeometricGraph base = make_kfold(10); // radius 1 exactly
    double acc = 0.0;
    const int trials = 10000;
    for (int t = 0; t < trials; ++t) {
        const GeometricGraph p = perturb(base, eps, static_cast<uint64_t>(t));
        // Re-centering shifts nodes slightly; compare pre-centering by
        // adding the mean shift back out of the comparison via pairing.
        for (int i = 0; i < base.num_nodes(); ++i)
            acc += (p.coords[static_cast<size_t>(i)] - base.coords[static_cast<size_t>(i)]).norm();
    }
    const double mean_disp = acc / (trials * base.num_nodes());
    const double expect = eps * std::sqrt(2.0 / 3.14159265358979323846);
    // Re-centering inflates the tolerance a little; 3% is ample at N=10.
    CHECK(std::abs(mean_disp - expect) < 0.03 * expect);
}

TEST_CASE("centering is idempotent bitwise") {
    GeometricGraph g;
    g.node_scalars = Matrix(3, 1);
    g.coords = {{1.1, 2.2, 3.3}, {-0.4, 0.5, 0.6}, {0.7, -0.8, 0.9}};
    g.edges = {{0, 1, {}}, {1, 0, {}}};
    g.center();
    const std::vector<Vec3> once = g.coords;
    g.center();
    for (size_t i = 0; i < once.size(); ++i) {
        CHECK(g.coords[i].x == once[i].x);
        CHECK(g.coords[i].y == once[i].y);
        CHECK(g.coords[i].z == once[i].z);
    }
}

TEST_CASE("nbody generation is reproducible and re-integrable") {
    NBodyOptions opt;
    opt.bodies = 6;
    opt.steps = 200;
    opt.dt = 1e-3;
    const auto samples = nbody_simulate(opt, 3, 2024);
    for (const NBodySample& s : samples) {
        // Re-integrating the stored initial state reproduces the endpoint.
        const NBodySample redo = integrate_trajectory(s.charges, s.positions_t0, s.velocities_t0, opt);
        for (size_t i = 0; i < s.charges.size(); ++i)
            CHECK((redo.positions_t1[i] - s.positions_t1[i]).norm() == 0.0);
    }
    const auto again = nbody_simulate(opt, 3, 2024);
    for (size_t s = 0; s < samples.size(); ++s)
        for (size_t i = 0; i < samples[s].positions_t1.size(); ++i)
            CHECK((samples[s].positions_t1[i] - again[s].positions_t1[i]).norm() == 0.0);
}

TEST_CASE("nbody momentum conservation through the integrator") {
    NBodyOptions opt;
    opt.bodies = 5;
    opt.steps = 400;
    opt.dt = 2e-3;
    Rng rng(31);
    std::vector<double> q = {1, 1, 0, 1, 1};
    std::vector<Vec3> x, v;
    for (int i = 0; i < 5; ++i) {
        x.push_back(rng.normal_vec3() * 0.5);
        v.push_back(rng.normal_vec3() * 0.5);
    }
    Vec3 before{};
    for (const Vec3& vi : v) before += vi;
    // final momentum: integrate and recompute velocities by finishing state
    std::vector<Vec3> xs = x, vs = v;
    const NBodySample s = integrate_trajectory(q, xs, vs, opt);
    // integrate_trajectory returns positions only; step once more manually to
    // fetch final velocities via a zero-step trick: redo integration and track.
    // Here we simply verify that a direct re-run with the same inputs is
    // deterministic and that the two-body repulsion sanity holds below.
    CHECK(s.positions_t1.size() == 5);

    // Direct momentum check with a local copy of the dynamics.
    std::vector<Vec3> pos = x, vel = v, acc(5);
    auto accel = [&](const std::vector<Vec3>& p, std::vector<Vec3>& a) {
        for (Vec3& ai : a) ai = {};
        for (size_t i = 0; i < p.size(); ++i)
            for (size_t j = i + 1; j < p.size(); ++j) {
                const Vec3 d = p[i] - p[j];
                const double r2 = d.norm2() + opt.softening * opt.softening;
                const Vec3 f = d * (q[i] * q[j] / (r2 * std::sqrt(r2)));
                a[i] += f;
                a[j] -= f;
            }
    };
    accel(pos, acc);
    for (int step = 0; step < opt.steps; ++step) {
        for (size_t i = 0; i < pos.size(); ++i) vel[i] += acc[i] * (0.5 * opt.dt);
        for (size_t i = 0; i < pos.size(); ++i) pos[i] += vel[i] * opt.dt;
        accel(pos, acc);
        for (size_t i = 0; i < pos.size(); ++i) vel[i] += acc[i] * (0.5 * opt.dt);
    }
    Vec3 after{};
    for (const Vec3& vi : vel) after += vi;
    CHECK((after - before).norm() < 1e-8);
    for (size_t i = 0; i < pos.size(); ++i) CHECK((pos[i] - s.positions_t1[i]).norm() < 1e-12);
}

TEST_CASE("two like charges repel from rest") {
    NBodyOptions opt;
    opt.bodies = 2;
    opt.steps = 1;
    opt.dt = 1e-2;
    const std::vector<double> q = {1.0, 1.0};
    const std::vector<Vec3> x = {{-0.25, 0, 0}, {0.25, 0, 0}};
    const std::vector<Vec3> v = {{0, 0, 0}, {0, 0, 0}};
    const NBodySample s = integrate_trajectory(q, x, v, opt);
    const double before = (x[1] - x[0]).norm();
    const double after = (s.positions_t1[1] - s.positions_t1[0]).norm();
    CHECK(after > before);
}

TEST_CASE("nbody dynamics are rotation equivariant") {
    NBodyOptions opt;
    opt.bodies = 5;
    opt.steps = 300;
    opt.dt = 1e-3;
    Rng rng(77);
    std::vector<double> q;
    std::vector<Vec3> x, v;
    for (int i = 0; i < 5; ++i) {
        q.push_back(rng.next_u64() & 1 ? 1.0 : 0.0);
        x.push_back(rng.normal_vec3() * 0.5);
        v.push_back(rng.normal_vec3() * 0.5);
    }
    const Rotation3 r = random_rotation(123);
    std::vector<Vec3> xr, vr;
    for (const Vec3& p : x) xr.push_back(r.m.apply(p));
    for (const Vec3& p : v) vr.push_back(r.m.apply(p));
    const NBodySample plain = integrate_trajectory(q, x, v, opt);
    const NBodySample rotated = integrate_trajectory(q, xr, vr, opt);
    for (size_t i = 0; i < q.size(); ++i)
        CHECK((rotated.positions_t1[i] - r.m.apply(plain.positions_t1[i])).norm() < 1e-8);
}

TEST_CASE("dataset round trip") {
    NBodyOptions opt;
    opt.bodies = 4;
    opt.steps = 50;
    opt.dt = 1e-3;
    const auto samples = nbody_simulate(opt, 5, 9);
    const std::string path = "test_dataset_roundtrip.jsonl";
    write_dataset(samples, path);
    const auto loaded = read_dataset(path);
    REQUIRE(loaded.size() == samples.size());
    for (size_t s = 0; s < samples.size(); ++s) {
        for (size_t i = 0; i < samples[s].charges.size(); ++i) {
            CHECK(loaded[s].charges[i] == samples[s].charges[i]);
            CHECK((loaded[s].positions_t0[i] - samples[s].positions_t0[i]).norm() == 0.0);
            CHECK((loaded[s].velocities_t0[i] - samples[s].velocities_t0[i]).norm() == 0.0);
            CHECK((loaded[s].positions_t1[i] - samples[s].positions_t1[i]).norm() == 0.0);
        }
    }
    std::remove(path.c_str());
    CHECK_THROWS_AS(read_dataset("does_not_exist.jsonl"), Error);
}

TEST_CASE("sample_to_graph carries charges, velocities and charge products") {
    NBodyOptions opt;
    opt.bodies = 3;
    opt.steps = 10;
    opt.dt = 1e-3;
    const auto samples = nbody_simulate(opt, 1, 5);
    const GeometricGraph g = sample_to_graph(samples[0]);
    CHECK(g.num_nodes() == 3);
    REQUIRE(g.velocities.has_value());
    CHECK(g.edges.size() == 6);
    for (const Edge& e : g.edges) {
        REQUIRE(e.scalars.size() == 1);
        CHECK(e.scalars[0] == samples[0].charges[static_cast<size_t>(e.i)] * samples[0].charges[static_cast<size_t>(e.j)]);
    }
}

#include "hegnn/verify.hpp"

#include <cmath>

#include <json.hpp>

#include "hegnn/groups.hpp"
#include "hegnn/model.hpp"
#include "hegnn/rng.hpp"
#include "hegnn/specfun.hpp"
#include "hegnn/train.hpp"

namespace hegnn::verify {

namespace {

using specfun::O3Element;
using specfun::Parity;
using specfun::Rotation3;
using specfun::UnitVec3;

double vec_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0.0;
    for (size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

double check_parity(uint64_t seed, bool fault) {
    Rng rng(seed);
    double worst = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
        const int l = static_cast<int>(rng.next_u64() % 11);
        const Vec3 u = rng.unit_vec3();
        const auto yp = specfun::sph_harm(l, UnitVec3::checked(u));
        const auto ym = specfun::sph_harm(l, UnitVec3::checked(u * -1.0));
        double sign = (l % 2 == 0) ? 1.0 : -1.0;
        if (fault) sign = -sign;
        for (size_t i = 0; i < yp.size(); ++i)
            worst = std::max(worst, std::abs(ym[i] - sign * yp[i]));
    }
    return worst;
}

double check_equivariance_identity(uint64_t seed) {
    Rng rng(seed);
    double worst = 0.0;
    for (int trial = 0; trial < 300; ++trial) {
        const int l = static_cast<int>(rng.next_u64() % 9);
        const Rotation3 r = geom::random_rotation(rng.next_u64());
        const Vec3 u = rng.unit_vec3();
        const auto lhs = specfun::sph_harm(l, UnitVec3::normalized(r.m.apply(u)));
        const auto rhs = specfun::wigner_d(l, r).apply(specfun::sph_harm(l, UnitVec3::checked(u)));
        worst = std::max(worst, vec_diff(lhs, rhs));
    }
    return worst;
}

double check_addition_theorem(uint64_t seed) {
    Rng rng(seed);
    double worst = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
        const int l = static_cast<int>(rng.next_u64() % 11);
        const Vec3 u = rng.unit_vec3();
        const Vec3 v = rng.unit_vec3();
        const auto yu = specfun::sph_harm(l, UnitVec3::checked(u));
        const auto yv = specfun::sph_harm(l, UnitVec3::checked(v));
        double dot = 0.0;
        for (size_t i = 0; i < yu.size(); ++i) dot += yu[i] * yv[i];
        worst = std::max(worst, std::abs(dot - (2 * l + 1) * specfun::legendre_eval(l, u.dot(v))));
    }
    return worst;
}

double check_legendre_recurrence() {
    double worst = 0.0;
    for (int l = 1; l <= 29; ++l)
        for (int i = 0; i <= 32; ++i) {
            const double t = -1.0 + 2.0 * i / 32.0;
            const double lhs = (l + 1) * specfun::legendre_eval(l + 1, t);
            const double rhs = (2 * l + 1) * t * specfun::legendre_eval(l, t) - l * specfun::legendre_eval(l - 1, t);
            worst = std::max(worst, std::abs(lhs - rhs));
        }
    return worst;
}

double check_homomorphism(uint64_t seed) {
    Rng rng(seed);
    double worst = 0.0;
    for (int trial = 0; trial < 40; ++trial) {
        const int l = static_cast<int>(rng.next_u64() % 7);
        const O3Element g1{geom::random_rotation(rng.next_u64()), rng.next_u64() % 2 ? Parity::odd : Parity::even};
        const O3Element g2{geom::random_rotation(rng.next_u64()), rng.next_u64() % 2 ? Parity::odd : Parity::even};
        const Matrix lhs = specfun::o3_rep(l, g1.compose(g2));
        const Matrix rhs = specfun::o3_rep(l, g1).mul(specfun::o3_rep(l, g2));
        worst = std::max(worst, lhs.max_abs_diff(rhs));
        const Matrix m = specfun::o3_rep(l, g1);
        worst = std::max(worst, m.transposed().mul(m).max_abs_diff(Matrix::identity(2 * l + 1)));
    }
    return worst;
}

double check_projectors() {
    double worst = 0.0;
    for (const char* name : {"Ci", "C4", "D5", "T", "O", "I"}) {
        const groups::FiniteGroup g = groups::enumerate_group(name);
        for (int l : {0, 1, 2, 3, 5, 8}) {
            const Matrix m = groups::group_average(l, g);
            worst = std::max(worst, m.mul(m).max_abs_diff(m));
            if (std::abs(m.trace()) < 1e-9) worst = std::max(worst, m.max_abs());
        }
    }
    return worst;
}

double check_trace_table() {
    double worst = 0.0;
    for (const char* name : {"Ci", "C3", "C6", "D4", "D7", "T", "O", "I"}) {
        const groups::GroupTag tag = groups::GroupTag::parse(name);
        const groups::FiniteGroup g = groups::enumerate_group(tag);
        for (int l = 0; l <= 12; ++l) {
            const double brute = groups::brute_force_trace(l, g);
            worst = std::max(worst, std::abs(brute - static_cast<double>(groups::trace_closed_form(l, tag))));
        }
    }
    return worst;
}

double check_model_equivariance(uint64_t seed) {
    double worst = 0.0;
    for (uint64_t trial = 0; trial < 12; ++trial) {
        Rng rng(derive_seed(seed, trial));
        geom::GeometricGraph g;
        const int n = 4;
        g.node_scalars = Matrix(n, 1);
        for (int i = 0; i < n; ++i) g.node_scalars(i, 0) = rng.normal();
        for (int i = 0; i < n; ++i) g.coords.push_back(rng.normal_vec3());
        g.velocities.emplace();
        for (int i = 0; i < n; ++i) g.velocities->push_back(rng.normal_vec3());
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (i != j) g.edges.push_back({i, j, {}});
        g.center();

        model::ModelConfig cfg = model::ModelConfig::standard(3);
        cfg.use_velocity = true;
        cfg.center_anchor = (trial % 2 == 0);
        const model::ModelParams params = model::ModelParams::seeded(cfg, derive_seed(seed, 100 + trial));
        const O3Element e{geom::random_rotation(derive_seed(seed, 200 + trial)),
                          trial % 2 ? Parity::odd : Parity::even};

        const model::SteerableState out = model::forward(g, params);
        const model::SteerableState moved = model::forward(g.transformed(e), params);
        const Mat3 cart = e.cartesian();
        for (int i = 0; i < n; ++i) {
            worst = std::max(worst, vec_diff(moved.h[static_cast<size_t>(i)], out.h[static_cast<size_t>(i)]));
            worst = std::max(worst, (moved.x[static_cast<size_t>(i)] - cart.apply(out.x[static_cast<size_t>(i)])).norm());
            for (size_t k = 0; k < out.degrees.size(); ++k) {
                const Matrix rep = specfun::o3_rep(out.degrees[k], e);
                const int width = 2 * out.degrees[k] + 1;
                const auto& block = out.feat[k][static_cast<size_t>(i)];
                const int channels = static_cast<int>(block.size()) / width;
                std::vector<double> expect(block.size());
                for (int c = 0; c < channels; ++c) {
                    const std::vector<double> chunk(block.begin() + c * width, block.begin() + (c + 1) * width);
                    const auto movedc = rep.apply(chunk);
                    std::copy(movedc.begin(), movedc.end(), expect.begin() + c * width);
                }
                worst = std::max(worst, vec_diff(moved.feat[k][static_cast<size_t>(i)], expect));
            }
        }
    }
    return worst;
}

double check_legendre_message_identity(uint64_t seed) {
    double worst = 0.0;
    for (uint64_t trial = 0; trial < 10; ++trial) {
        Rng rng(derive_seed(seed, 17 + trial));
        geom::GeometricGraph g;
        const int n = 5;
        g.node_scalars = Matrix(n, 1);
        for (int i = 0; i < n; ++i) {
            g.node_scalars(i, 0) = 1.0;
            g.coords.push_back(rng.normal_vec3());
        }
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (i != j) g.edges.push_back({i, j, {}});
        g.center();

        model::ModelConfig cfg;
        cfg.max_degree = 4;
        cfg.channels = {1, 1, 1, 1, 1};
        cfg.degree_mask = {1, 2, 3, 4};
        cfg.hidden_width = 8;
        cfg.layer_count = 1;
        const model::ModelParams params = model::ModelParams::seeded(cfg, derive_seed(seed, 31 + trial));
        model::ForwardOptions opts;
        opts.unit_gates = true;
        const model::SteerableState s = model::init_features(g, params, opts);
        const model::EdgeMessages msgs = model::message(s, g, params, 0);
        const auto nbrs = g.neighbor_lists();
        for (size_t e = 0; e < g.edges.size(); ++e) {
            const int i = g.edges[e].i, j = g.edges[e].j;
            for (int l = 1; l <= 4; ++l) {
                double expect = 0.0;
                for (int snode : nbrs[static_cast<size_t>(i)])
                    for (int tnode : nbrs[static_cast<size_t>(j)]) {
                        const Vec3 xis = g.coords[static_cast<size_t>(i)] - g.coords[static_cast<size_t>(snode)];
                        const Vec3 xjt = g.coords[static_cast<size_t>(j)] - g.coords[static_cast<size_t>(tnode)];
                        expect += (2 * l + 1) * specfun::legendre_eval(l, xis.dot(xjt) / (xis.norm() * xjt.norm()));
                    }
                worst = std::max(worst, std::abs(msgs.z[e][static_cast<size_t>(l - 1)] - expect));
            }
        }
    }
    return worst;
}

double check_gradients(uint64_t seed, bool fault) {
    const double fault_shift = fault ? 1e-3 : 0.0;
    double worst = 0.0;
    worst = std::max(worst, train::grad_check(train::GradCheckTarget::dense_layer, derive_seed(seed, 1), fault_shift));
    worst = std::max(worst, train::grad_check(train::GradCheckTarget::message_op, derive_seed(seed, 2), fault_shift));
    worst = std::max(worst, train::grad_check(train::GradCheckTarget::full_model, derive_seed(seed, 3), fault_shift));
    return worst;
}

} // namespace

std::string Report::to_json() const {
    nlohmann::json doc;
    doc["seed"] = seed;
    doc["all_passed"] = all_passed;
    nlohmann::json arr = nlohmann::json::array();
    for (const CheckResult& c : checks) {
        nlohmann::json item;
        item["name"] = c.name;
        item["tolerance"] = c.tolerance;
        item["max_error"] = c.max_error;
        item["passed"] = c.passed;
        arr.push_back(item);
    }
    doc["checks"] = arr;
    return doc.dump(2);
}

Report run(uint64_t seed, Fault fault) {
    Report report;
    report.seed = seed;
    auto add = [&](const std::string& name, double tolerance, double max_error) {
        CheckResult r;
        r.name = name;
        r.tolerance = tolerance;
        r.max_error = max_error;
        r.passed = max_error < tolerance;
        report.checks.push_back(r);
    };

    add("sph_harm_parity", 1e-12, check_parity(derive_seed(seed, 1), fault == Fault::parity));
    add("sph_harm_rotation_identity", 1e-9, check_equivariance_identity(derive_seed(seed, 2)));
    add("addition_theorem", 1e-9, check_addition_theorem(derive_seed(seed, 3)));
    add("legendre_recurrence", 1e-12, check_legendre_recurrence());
    add("o3_homomorphism_orthogonality", 1e-9, check_homomorphism(derive_seed(seed, 4)));
    add("group_average_projector", 1e-8, check_projectors());
    add("trace_closed_form_vs_brute", 1e-6, check_trace_table());
    add("model_equivariance", 1e-8, check_model_equivariance(derive_seed(seed, 5)));
    add("legendre_message_identity", 1e-9, check_legendre_message_identity(derive_seed(seed, 6)));
    add("gradient_finite_difference", 1e-5, check_gradients(derive_seed(seed, 7), fault == Fault::gate));

    report.all_passed = true;
    for (const CheckResult& c : report.checks) report.all_passed = report.all_passed && c.passed;
    return report;
}

} // namespace hegnn::verify

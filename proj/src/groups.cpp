#include "hegnn/groups.hpp"

#include <algorithm>
#include <cmath>

#include "hegnn/error.hpp"

namespace hegnn::groups {

using specfun::O3Element;
using specfun::Parity;
using specfun::Rotation3;

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;
constexpr double kDedupTol = 1e-9;
constexpr double kGolden = 1.61803398874989484820458683436563812;

bool list_contains(const std::vector<O3Element>& list, const O3Element& g, double tol) {
    for (const O3Element& e : list)
        if (e.approx_equal(g, tol)) return true;
    return false;
}

std::vector<O3Element> close_under_composition(std::vector<O3Element> gens, size_t cap) {
    std::vector<O3Element> elements;
    elements.push_back(O3Element::identity());
    for (const O3Element& g : gens)
        if (!list_contains(elements, g, kDedupTol)) elements.push_back(g);
    // Worklist closure; group orders here are at most 120.
    bool grew = true;
    while (grew) {
        grew = false;
        const size_t count = elements.size();
        for (size_t a = 0; a < count; ++a) {
            for (size_t b = 0; b < count; ++b) {
                const O3Element c = elements[a].compose(elements[b]);
                if (!list_contains(elements, c, kDedupTol)) {
                    elements.push_back(c);
                    grew = true;
                    require(elements.size() <= cap, ErrorCode::internal,
                            "group closure exceeded the expected order");
                }
            }
        }
    }
    return elements;
}

O3Element rot(const Vec3& axis, double angle) {
    return {Rotation3::from_axis_angle(axis, angle), Parity::even};
}

std::vector<O3Element> base_generators(GroupFamily family, int n) {
    switch (family) {
        case GroupFamily::Ci:
            return {O3Element::inversion()};
        case GroupFamily::Cn:
            return {rot({0, 0, 1}, 2.0 * kPi / n)};
        case GroupFamily::Dn:
            // C2 axis through the first node of the matching k-fold, i.e. x.
            return {rot({0, 0, 1}, 2.0 * kPi / n), rot({1, 0, 0}, kPi)};
        case GroupFamily::T:
            return {rot({1, 1, 1}, 2.0 * kPi / 3.0), rot({0, 0, 1}, kPi)};
        case GroupFamily::O:
            return {rot({0, 0, 1}, kPi / 2.0), rot({1, 1, 1}, 2.0 * kPi / 3.0)};
        case GroupFamily::I:
            // 5-fold vertex axis and a 2-fold edge-midpoint axis (z).
            return {rot({0, 1, kGolden}, 2.0 * kPi / 5.0), rot({0, 0, 1}, kPi)};
    }
    fail(ErrorCode::internal, "unreachable");
}

size_t expected_order(const GroupTag& tag) {
    size_t base = 0;
    switch (tag.family) {
        case GroupFamily::Ci: base = 2; break;
        case GroupFamily::Cn: base = static_cast<size_t>(tag.n); break;
        case GroupFamily::Dn: base = static_cast<size_t>(2 * tag.n); break;
        case GroupFamily::T: base = 12; break;
        case GroupFamily::O: base = 24; break;
        case GroupFamily::I: base = 60; break;
    }
    return tag.times_ci ? 2 * base : base;
}

const char* family_name(GroupFamily f) {
    switch (f) {
        case GroupFamily::Ci: return "Ci";
        case GroupFamily::Cn: return "C";
        case GroupFamily::Dn: return "D";
        case GroupFamily::T: return "T";
        case GroupFamily::O: return "O";
        case GroupFamily::I: return "I";
    }
    return "?";
}

} // namespace

GroupTag GroupTag::parse(const std::string& name) {
    std::string base = name;
    bool times_ci = false;
    if (const size_t pos = name.find("xCi"); pos != std::string::npos && pos + 3 == name.size()) {
        base = name.substr(0, pos);
        times_ci = true;
    }
    GroupTag tag;
    tag.times_ci = times_ci;
    if (base == "Ci") {
        require(!times_ci, ErrorCode::invalid_argument, "CixCi is not a distinct group");
        tag.family = GroupFamily::Ci;
        return tag;
    }
    if (base == "T") { tag.family = GroupFamily::T; return tag; }
    if (base == "O") { tag.family = GroupFamily::O; return tag; }
    if (base == "I") { tag.family = GroupFamily::I; return tag; }
    if (base.size() >= 2 && (base[0] == 'C' || base[0] == 'D')) {
        int n = 0;
        for (size_t i = 1; i < base.size(); ++i) {
            require(base[i] >= '0' && base[i] <= '9', ErrorCode::invalid_argument,
                    "unknown group tag: " + name);
            n = n * 10 + (base[i] - '0');
        }
        require(n >= 2, ErrorCode::invalid_argument, "cyclic/dihedral order must be at least 2");
        tag.family = base[0] == 'C' ? GroupFamily::Cn : GroupFamily::Dn;
        tag.n = n;
        return tag;
    }
    fail(ErrorCode::invalid_argument, "unknown group tag: " + name);
}

std::string GroupTag::name() const {
    std::string s = family_name(family);
    if (family == GroupFamily::Cn || family == GroupFamily::Dn) s += std::to_string(n);
    if (times_ci) s += "xCi";
    return s;
}

bool FiniteGroup::contains(const O3Element& g, double tol) const {
    return list_contains(elements, g, tol);
}

FiniteGroup enumerate_group(const GroupTag& tag) {
    if (tag.family == GroupFamily::Cn || tag.family == GroupFamily::Dn)
        require(tag.n >= 2, ErrorCode::invalid_argument, "cyclic/dihedral order must be at least 2");
    std::vector<O3Element> gens = base_generators(tag.family, tag.n);
    if (tag.times_ci) gens.push_back(O3Element::inversion());
    const size_t expect = expected_order(tag);
    FiniteGroup group{tag, close_under_composition(std::move(gens), expect + 8)};
    require(group.elements.size() == expect, ErrorCode::internal,
            "group closure produced an unexpected order for " + tag.name());
    return group;
}

FiniteGroup enumerate_group(const std::string& name) {
    return enumerate_group(GroupTag::parse(name));
}

Matrix group_average(int l, const FiniteGroup& group) {
    require(l <= specfun::kMaxDegree, ErrorCode::invalid_argument, "degree exceeds the supported ceiling of 30");
    Matrix sum(2 * l + 1, 2 * l + 1);
    for (const O3Element& g : group.elements) sum = sum + specfun::o3_rep(l, g);
    return sum * (1.0 / static_cast<double>(group.order()));
}

double brute_force_trace(int l, const FiniteGroup& group) {
    double sum = 0.0;
    for (const O3Element& g : group.elements) sum += specfun::o3_rep(l, g).trace();
    return sum / static_cast<double>(group.order());
}

bool has_trace_closed_form(const GroupTag& tag) {
    return !tag.times_ci;
}

long trace_closed_form(int l, const GroupTag& tag) {
    require(l >= 0, ErrorCode::invalid_argument, "degree must be non-negative");
    require(has_trace_closed_form(tag), ErrorCode::invalid_argument,
            "no closed-form trace for " + tag.name());
    const bool even = (l % 2) == 0;
    switch (tag.family) {
        case GroupFamily::Ci:
            return even ? 2L * l + 1 : 0L;
        case GroupFamily::Cn:
            return 2L * (l / tag.n) + 1;
        case GroupFamily::Dn:
            return static_cast<long>(l / tag.n) + (even ? 1 : 0);
        case GroupFamily::T: {
            static const int b[6] = {1, 0, 0, 1, 1, 0};
            return static_cast<long>(l / 6) + b[l % 6];
        }
        case GroupFamily::O: {
            static const int b[12] = {1, 0, 0, 0, 1, 0, 1, 0, 1, 1, 1, 0};
            return static_cast<long>(l / 12) + b[l % 12];
        }
        case GroupFamily::I: {
            static const int b[30] = {1, 0, 0, 0, 0, 0, 1, 0, 0, 0, 1, 0, 1, 0, 0,
                                      1, 1, 0, 1, 0, 1, 1, 1, 0, 1, 1, 1, 1, 1, 0};
            return static_cast<long>(l / 30) + b[l % 30];
        }
    }
    fail(ErrorCode::internal, "unreachable");
}

int fixed_subspace_dim(int l, const FiniteGroup& group) {
    const Matrix avg = group_average(l, group);
    const Matrix residual = Matrix::identity(2 * l + 1) - avg;
    return (2 * l + 1) - symmetric_rank(residual, 1e-8);
}

std::set<int> degenerate_degrees(const GroupTag& tag, int lmax) {
    require(lmax <= specfun::kMaxDegree, ErrorCode::invalid_argument, "degree exceeds the supported ceiling of 30");
    std::set<int> degrees;
    if (has_trace_closed_form(tag)) {
        for (int l = 0; l <= lmax; ++l)
            if (trace_closed_form(l, tag) == 0) degrees.insert(l);
        return degrees;
    }
    const FiniteGroup group = enumerate_group(tag);
    for (int l = 0; l <= lmax; ++l)
        if (group_average(l, group).max_abs() < 1e-9) degrees.insert(l);
    return degrees;
}

std::set<int> degenerate_degrees(std::span<const GroupTag> tags, int lmax) {
    std::set<int> degrees;
    for (const GroupTag& tag : tags) {
        const std::set<int> part = degenerate_degrees(tag, lmax);
        degrees.insert(part.begin(), part.end());
    }
    return degrees;
}

} // namespace hegnn::groups

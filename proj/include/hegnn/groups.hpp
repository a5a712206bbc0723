#ifndef HEGNN_GROUPS_HPP
#define HEGNN_GROUPS_HPP

#include <set>
#include <span>
#include <string>
#include <vector>

#include "hegnn/linalg.hpp"
#include "hegnn/specfun.hpp"

namespace hegnn::groups {

// Finite subgroups of O(3) handled here: the named rotation groups, and
// their products with the inversion group Ci.
enum class GroupFamily { Ci, Cn, Dn, T, O, I };

struct GroupTag {
    GroupFamily family = GroupFamily::Ci;
    int n = 0;               // order parameter for Cn / Dn
    bool times_ci = false;   // product with the inversion group

    // Parses "Ci", "C5", "D7", "T", "O", "I", and products like "TxCi".
    static GroupTag parse(const std::string& name);
    std::string name() const;
};

struct FiniteGroup {
    GroupTag tag;
    std::vector<specfun::O3Element> elements;

    size_t order() const { return elements.size(); }
    bool contains(const specfun::O3Element& g, double tol = 1e-8) const;
};

// Generates the full element list by closure from fixed generators:
// Cn/Dn about the z axis (the dihedral C2 axis along x), T and O aligned to
// the axis-aligned cube, I aligned to the icosahedron with vertices at the
// cyclic permutations of (0, +-1, +-phi). Elements are deduplicated at 1e-9.
FiniteGroup enumerate_group(const GroupTag& tag);
FiniteGroup enumerate_group(const std::string& name);

// Arithmetic mean of o3_rep(l, g) over the group; a symmetric projector.
Matrix group_average(int l, const FiniteGroup& group);

// Mean trace of the representation over the group, computed from the
// constructed matrices (the brute-force side of the trace table).
double brute_force_trace(int l, const FiniteGroup& group);

// Closed-form trace of the group average. Defined for the base families
// only (Ci, Cn, Dn, T, O, I), per the character tables of the point groups.
long trace_closed_form(int l, const GroupTag& tag);
bool has_trace_closed_form(const GroupTag& tag);

// Dimension of the subspace fixed by the whole group:
// (2l+1) - rank(I - group_average), rank via eigenvalue thresholding.
int fixed_subspace_dim(int l, const FiniteGroup& group);

// Degrees l <= lmax whose group average vanishes, i.e. on which every
// equivariant function of a graph symmetric under the group is zero. Uses
// the closed form when one exists, otherwise the matrix norm.
std::set<int> degenerate_degrees(const GroupTag& tag, int lmax);

// Union over several symmetry groups, for structures that admit more than
// one (e.g. the cube under both Ci and O).
std::set<int> degenerate_degrees(std::span<const GroupTag> tags, int lmax);

} // namespace hegnn::groups

#endif

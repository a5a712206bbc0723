#ifndef HEGNN_VERIFY_HPP
#define HEGNN_VERIFY_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace hegnn::verify {

// Negative-control hooks: each fault corrupts one specific check so the
// suite can prove it is able to fail.
enum class Fault { none, parity, gate };

struct CheckResult {
    std::string name;
    double tolerance = 0.0;
    double max_error = 0.0;
    bool passed = false;
};

struct Report {
    uint64_t seed = 0;
    std::vector<CheckResult> checks;
    bool all_passed = false;

    std::string to_json() const;
};

// Runs the cross-module invariant suite: special-function identities, group
// projector laws, model equivariance, the Legendre message identity, and the
// gradient checks.
Report run(uint64_t seed, Fault fault = Fault::none);

} // namespace hegnn::verify

#endif

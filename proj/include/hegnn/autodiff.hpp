#ifndef HEGNN_AUTODIFF_HPP
#define HEGNN_AUTODIFF_HPP

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "hegnn/error.hpp"

namespace hegnn::ad {

// Append-only tape of vector-valued primitives. Nodes are created in
// topological order by construction; the reverse pass walks the records
// backwards, which fixes the gradient accumulation order.
class Tape {
public:
    using Id = int32_t;

    Id constant(std::vector<double> value);
    Id scalar_constant(double value) { return constant({value}); }
    // Leaf with respect to which gradients are requested.
    Id param(std::span<const double> value);

    Id add(Id a, Id b);
    Id sub(Id a, Id b);
    Id mul(Id a, Id b);               // elementwise
    Id scale(Id v, Id s);             // vector times length-1 scalar node
    Id scale_const(Id v, double c);
    Id matvec(Id w, Id x, int rows, int cols); // w: flat row-major rows*cols
    Id dot(Id a, Id b);
    Id concat(std::span<const Id> parts);
    Id slice(Id v, int offset, int length);
    Id silu(Id v);                     // x * sigmoid(x)
    Id sum(Id v);

    const std::vector<double>& value(Id id) const { return nodes_[static_cast<size_t>(id)].value; }
    size_t size() const { return nodes_.size(); }

    // Reverse accumulation from a scalar loss; returns one gradient array
    // per requested parameter node (zeros for disconnected parameters).
    std::vector<std::vector<double>> gradients(Id loss, std::span<const Id> params) const;

private:
    enum class Op : uint8_t {
        constant, param, add, sub, mul, scale, scale_const,
        matvec, dot, concat, slice, silu, sum,
    };

    struct Node {
        Op op;
        Id a = -1;
        Id b = -1;
        int i0 = 0;            // matvec rows / slice offset
        int i1 = 0;            // matvec cols / slice length
        double c = 0.0;        // scale_const factor
        std::vector<Id> parts; // concat inputs
        std::vector<double> value;
    };

    Id push(Node node) {
        nodes_.push_back(std::move(node));
        return static_cast<Id>(nodes_.size() - 1);
    }

    const Node& at(Id id) const { return nodes_[static_cast<size_t>(id)]; }

    std::vector<Node> nodes_;
};

inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// The same primitive vocabulary evaluated immediately on plain vectors, so
// model code can be written once and run either eagerly or on a tape.
struct EagerBackend {
    using Value = std::vector<double>;

    static Value constant(std::vector<double> v) { return v; }
    static Value add(const Value& a, const Value& b);
    static Value sub(const Value& a, const Value& b);
    static Value mul(const Value& a, const Value& b);
    static Value scale(const Value& v, const Value& s);
    static Value scale_const(const Value& v, double c);
    static Value matvec(const Value& w, const Value& x, int rows, int cols);
    static Value dot(const Value& a, const Value& b);
    static Value concat(std::span<const Value> parts);
    static Value slice(const Value& v, int offset, int length);
    static Value silu(const Value& v);
    static double scalar(const Value& v) { return v.at(0); }
};

struct TapeBackend {
    using Value = Tape::Id;
    Tape* tape = nullptr;

    Value constant(std::vector<double> v) const { return tape->constant(std::move(v)); }
    Value add(Value a, Value b) const { return tape->add(a, b); }
    Value sub(Value a, Value b) const { return tape->sub(a, b); }
    Value mul(Value a, Value b) const { return tape->mul(a, b); }
    Value scale(Value v, Value s) const { return tape->scale(v, s); }
    Value scale_const(Value v, double c) const { return tape->scale_const(v, c); }
    Value matvec(Value w, Value x, int rows, int cols) const { return tape->matvec(w, x, rows, cols); }
    Value dot(Value a, Value b) const { return tape->dot(a, b); }
    Value concat(std::span<const Value> parts) const { return tape->concat(parts); }
    Value slice(Value v, int offset, int length) const { return tape->slice(v, offset, length); }
    Value silu(Value v) const { return tape->silu(v); }
};

} // namespace hegnn::ad

#endif

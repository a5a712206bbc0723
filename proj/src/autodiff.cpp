#include "hegnn/autodiff.hpp"

#include <algorithm>

namespace hegnn::ad {

namespace {

void check_same_size(size_t a, size_t b, const char* what) {
    require(a == b, ErrorCode::invalid_argument, std::string(what) + ": size mismatch");
}

} // namespace

Tape::Id Tape::constant(std::vector<double> value) {
    Node n{Op::constant, -1, -1, 0, 0, 0.0, {}, std::move(value)};
    return push(std::move(n));
}

Tape::Id Tape::param(std::span<const double> value) {
    Node n{Op::param, -1, -1, 0, 0, 0.0, {}, std::vector<double>(value.begin(), value.end())};
    return push(std::move(n));
}

Tape::Id Tape::add(Id a, Id b) {
    const auto& va = at(a).value;
    const auto& vb = at(b).value;
    check_same_size(va.size(), vb.size(), "add");
    std::vector<double> out(va.size());
    for (size_t i = 0; i < out.size(); ++i) out[i] = va[i] + vb[i];
    return push({Op::add, a, b, 0, 0, 0.0, {}, std::move(out)});
}

Tape::Id Tape::sub(Id a, Id b) {
    const auto& va = at(a).value;
    const auto& vb = at(b).value;
    check_same_size(va.size(), vb.size(), "sub");
    std::vector<double> out(va.size());
    for (size_t i = 0; i < out.size(); ++i) out[i] = va[i] - vb[i];
    return push({Op::sub, a, b, 0, 0, 0.0, {}, std::move(out)});
}

Tape::Id Tape::mul(Id a, Id b) {
    const auto& va = at(a).value;
    const auto& vb = at(b).value;
    check_same_size(va.size(), vb.size(), "mul");
    std::vector<double> out(va.size());
    for (size_t i = 0; i < out.size(); ++i) out[i] = va[i] * vb[i];
    return push({Op::mul, a, b, 0, 0, 0.0, {}, std::move(out)});
}

Tape::Id Tape::scale(Id v, Id s) {
    const auto& vv = at(v).value;
    const auto& vs = at(s).value;
    require(vs.size() == 1, ErrorCode::invalid_argument, "scale: scalar node must have length 1");
    std::vector<double> out(vv.size());
    for (size_t i = 0; i < out.size(); ++i) out[i] = vv[i] * vs[0];
    return push({Op::scale, v, s, 0, 0, 0.0, {}, std::move(out)});
}

Tape::Id Tape::scale_const(Id v, double c) {
    const auto& vv = at(v).value;
    std::vector<double> out(vv.size());
    for (size_t i = 0; i < out.size(); ++i) out[i] = vv[i] * c;
    return push({Op::scale_const, v, -1, 0, 0, c, {}, std::move(out)});
}

Tape::Id Tape::matvec(Id w, Id x, int rows, int cols) {
    const auto& vw = at(w).value;
    const auto& vx = at(x).value;
    require(static_cast<int>(vw.size()) == rows * cols, ErrorCode::invalid_argument, "matvec: weight size mismatch");
    require(static_cast<int>(vx.size()) == cols, ErrorCode::invalid_argument, "matvec: input size mismatch");
    std::vector<double> out(static_cast<size_t>(rows), 0.0);
    for (int r = 0; r < rows; ++r) {
        double acc = 0.0;
        const double* row = vw.data() + static_cast<size_t>(r) * cols;
        for (int c = 0; c < cols; ++c) acc += row[c] * vx[static_cast<size_t>(c)];
        out[static_cast<size_t>(r)] = acc;
    }
    return push({Op::matvec, w, x, rows, cols, 0.0, {}, std::move(out)});
}

Tape::Id Tape::dot(Id a, Id b) {
    const auto& va = at(a).value;
    const auto& vb = at(b).value;
    check_same_size(va.size(), vb.size(), "dot");
    double acc = 0.0;
    for (size_t i = 0; i < va.size(); ++i) acc += va[i] * vb[i];
    return push({Op::dot, a, b, 0, 0, 0.0, {}, {acc}});
}

Tape::Id Tape::concat(std::span<const Id> parts) {
    std::vector<double> out;
    std::vector<Id> ids(parts.begin(), parts.end());
    for (Id p : ids) {
        const auto& v = at(p).value;
        out.insert(out.end(), v.begin(), v.end());
    }
    return push({Op::concat, -1, -1, 0, 0, 0.0, std::move(ids), std::move(out)});
}

Tape::Id Tape::slice(Id v, int offset, int length) {
    const auto& vv = at(v).value;
    require(offset >= 0 && length >= 0 && static_cast<size_t>(offset + length) <= vv.size(),
            ErrorCode::invalid_argument, "slice: range out of bounds");
    std::vector<double> out(vv.begin() + offset, vv.begin() + offset + length);
    return push({Op::slice, v, -1, offset, length, 0.0, {}, std::move(out)});
}

Tape::Id Tape::silu(Id v) {
    const auto& vv = at(v).value;
    std::vector<double> out(vv.size());
    for (size_t i = 0; i < out.size(); ++i) out[i] = vv[i] * sigmoid(vv[i]);
    return push({Op::silu, v, -1, 0, 0, 0.0, {}, std::move(out)});
}

Tape::Id Tape::sum(Id v) {
    const auto& vv = at(v).value;
    double acc = 0.0;
    for (double x : vv) acc += x;
    return push({Op::sum, v, -1, 0, 0, 0.0, {}, {acc}});
}

std::vector<std::vector<double>> Tape::gradients(Id loss, std::span<const Id> params) const {
    require(loss >= 0 && static_cast<size_t>(loss) < nodes_.size(), ErrorCode::invalid_argument,
            "gradients: unknown loss node");
    require(at(loss).value.size() == 1, ErrorCode::invalid_argument, "gradients: loss must be scalar");

    std::vector<std::vector<double>> adjoint(nodes_.size());
    auto adj = [&](Id id) -> std::vector<double>& {
        auto& a = adjoint[static_cast<size_t>(id)];
        if (a.empty()) a.assign(at(id).value.size(), 0.0);
        return a;
    };
    adj(loss)[0] = 1.0;

    for (Id id = loss; id >= 0; --id) {
        const Node& n = at(id);
        const auto& g = adjoint[static_cast<size_t>(id)];
        if (g.empty()) continue;
        switch (n.op) {
            case Op::constant:
            case Op::param:
                break;
            case Op::add: {
                auto& ga = adj(n.a);
                auto& gb = adj(n.b);
                for (size_t i = 0; i < g.size(); ++i) {
                    ga[i] += g[i];
                    gb[i] += g[i];
                }
                break;
            }
            case Op::sub: {
                auto& ga = adj(n.a);
                auto& gb = adj(n.b);
                for (size_t i = 0; i < g.size(); ++i) {
                    ga[i] += g[i];
                    gb[i] -= g[i];
                }
                break;
            }
            case Op::mul: {
                auto& ga = adj(n.a);
                auto& gb = adj(n.b);
                const auto& va = at(n.a).value;
                const auto& vb = at(n.b).value;
                for (size_t i = 0; i < g.size(); ++i) {
                    ga[i] += g[i] * vb[i];
                    gb[i] += g[i] * va[i];
                }
                break;
            }
            case Op::scale: {
                auto& gv = adj(n.a);
                auto& gs = adj(n.b);
                const auto& vv = at(n.a).value;
                const double s = at(n.b).value[0];
                double acc = 0.0;
                for (size_t i = 0; i < g.size(); ++i) {
                    gv[i] += g[i] * s;
                    acc += g[i] * vv[i];
                }
                gs[0] += acc;
                break;
            }
            case Op::scale_const: {
                auto& ga = adj(n.a);
                for (size_t i = 0; i < g.size(); ++i) ga[i] += g[i] * n.c;
                break;
            }
            case Op::matvec: {
                auto& gw = adj(n.a);
                auto& gx = adj(n.b);
                const auto& vx = at(n.b).value;
                const auto& vw = at(n.a).value;
                const int rows = n.i0, cols = n.i1;
                for (int r = 0; r < rows; ++r) {
                    const double gr = g[static_cast<size_t>(r)];
                    if (gr == 0.0) continue;
                    double* wrow = gw.data() + static_cast<size_t>(r) * cols;
                    const double* vrow = vw.data() + static_cast<size_t>(r) * cols;
                    for (int c = 0; c < cols; ++c) {
                        wrow[c] += gr * vx[static_cast<size_t>(c)];
                        gx[static_cast<size_t>(c)] += gr * vrow[c];
                    }
                }
                break;
            }
            case Op::dot: {
                auto& ga = adj(n.a);
                auto& gb = adj(n.b);
                const auto& va = at(n.a).value;
                const auto& vb = at(n.b).value;
                for (size_t i = 0; i < va.size(); ++i) {
                    ga[i] += g[0] * vb[i];
                    gb[i] += g[0] * va[i];
                }
                break;
            }
            case Op::concat: {
                size_t offset = 0;
                for (Id p : n.parts) {
                    auto& gp = adj(p);
                    for (size_t i = 0; i < gp.size(); ++i) gp[i] += g[offset + i];
                    offset += gp.size();
                }
                break;
            }
            case Op::slice: {
                auto& ga = adj(n.a);
                for (int i = 0; i < n.i1; ++i) ga[static_cast<size_t>(n.i0 + i)] += g[static_cast<size_t>(i)];
                break;
            }
            case Op::silu: {
                auto& ga = adj(n.a);
                const auto& va = at(n.a).value;
                for (size_t i = 0; i < g.size(); ++i) {
                    const double s = sigmoid(va[i]);
                    ga[i] += g[i] * s * (1.0 + va[i] * (1.0 - s));
                }
                break;
            }
            case Op::sum: {
                auto& ga = adj(n.a);
                for (double& gi : ga) gi += g[0];
                break;
            }
        }
    }

    std::vector<std::vector<double>> out;
    out.reserve(params.size());
    for (Id p : params) {
        require(at(p).op == Op::param, ErrorCode::invalid_argument, "gradients: node is not a parameter");
        auto& a = adjoint[static_cast<size_t>(p)];
        if (a.empty()) a.assign(at(p).value.size(), 0.0);
        out.push_back(a);
    }
    return out;
}

EagerBackend::Value EagerBackend::add(const Value& a, const Value& b) {
    check_same_size(a.size(), b.size(), "add");
    Value out(a.size());
    for (size_t i = 0; i < out.size(); ++i) out[i] = a[i] + b[i];
    return out;
}

EagerBackend::Value EagerBackend::sub(const Value& a, const Value& b) {
    check_same_size(a.size(), b.size(), "sub");
    Value out(a.size());
    for (size_t i = 0; i < out.size(); ++i) out[i] = a[i] - b[i];
    return out;
}

EagerBackend::Value EagerBackend::mul(const Value& a, const Value& b) {
    check_same_size(a.size(), b.size(), "mul");
    Value out(a.size());
    for (size_t i = 0; i < out.size(); ++i) out[i] = a[i] * b[i];
    return out;
}

EagerBackend::Value EagerBackend::scale(const Value& v, const Value& s) {
    require(s.size() == 1, ErrorCode::invalid_argument, "scale: scalar value must have length 1");
    Value out(v.size());
    for (size_t i = 0; i < out.size(); ++i) out[i] = v[i] * s[0];
    return out;
}

EagerBackend::Value EagerBackend::scale_const(const Value& v, double c) {
    Value out(v.size());
    for (size_t i = 0; i < out.size(); ++i) out[i] = v[i] * c;
    return out;
}

EagerBackend::Value EagerBackend::matvec(const Value& w, const Value& x, int rows, int cols) {
    require(static_cast<int>(w.size()) == rows * cols, ErrorCode::invalid_argument, "matvec: weight size mismatch");
    require(static_cast<int>(x.size()) == cols, ErrorCode::invalid_argument, "matvec: input size mismatch");
    Value out(static_cast<size_t>(rows), 0.0);
    for (int r = 0; r < rows; ++r) {
        double acc = 0.0;
        const double* row = w.data() + static_cast<size_t>(r) * cols;
        for (int c = 0; c < cols; ++c) acc += row[c] * x[static_cast<size_t>(c)];
        out[static_cast<size_t>(r)] = acc;
    }
    return out;
}

EagerBackend::Value EagerBackend::dot(const Value& a, const Value& b) {
    check_same_size(a.size(), b.size(), "dot");
    double acc = 0.0;
    for (size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return {acc};
}

EagerBackend::Value EagerBackend::concat(std::span<const Value> parts) {
    Value out;
    for (const Value& p : parts) out.insert(out.end(), p.begin(), p.end());
    return out;
}

EagerBackend::Value EagerBackend::slice(const Value& v, int offset, int length) {
    require(offset >= 0 && length >= 0 && static_cast<size_t>(offset + length) <= v.size(),
            ErrorCode::invalid_argument, "slice: range out of bounds");
    return Value(v.begin() + offset, v.begin() + offset + length);
}

EagerBackend::Value EagerBackend::silu(const Value& v) {
    Value out(v.size());
    for (size_t i = 0; i < out.size(); ++i) out[i] = v[i] * sigmoid(v[i]);
    return out;
}

} // namespace hegnn::ad

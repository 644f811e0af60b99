#include "gazeforge/tinynn/tape.hpp"

#include <algorithm>
#include <cmath>

namespace gazeforge::tinynn {

namespace {
constexpr double kProbFloor = 1e-12;

void check_same_shape(const Node* a, const Node* b, const char* op) {
    if (!a->value.same_shape(b->value))
        throw std::invalid_argument(std::string(op) + ": shape mismatch (" +
                                    std::to_string(a->value.rows()) + "x" +
                                    std::to_string(a->value.cols()) + " vs " +
                                    std::to_string(b->value.rows()) + "x" +
                                    std::to_string(b->value.cols()) + ")");
}
}  // namespace

Node* Tape::leaf(Tensor2 value, bool requires_grad, std::string name) {
    Node n;
    n.grad = Tensor2(value.rows(), value.cols(), 0.0);
    n.value = std::move(value);
    n.requires_grad = requires_grad;
    n.name = std::move(name);
    nodes_.push_back(std::move(n));
    return &nodes_.back();
}

Node* Tape::make(Tensor2 value, std::function<void(Node&)> backward, bool requires_grad) {
    Node n;
    n.grad = Tensor2(value.rows(), value.cols(), 0.0);
    n.value = std::move(value);
    n.requires_grad = requires_grad;
    n.backward = std::move(backward);
    nodes_.push_back(std::move(n));
    return &nodes_.back();
}

void Tape::backward(Node* root) {
    if (root->value.size() != 1) throw std::logic_error("Tape::backward: root must be 1x1");
    root->grad[0] = 1.0;
    for (auto it = nodes_.rbegin(); it != nodes_.rend(); ++it) {
        if (it->requires_grad && it->backward) it->backward(*it);
    }
}

Node* matmul(Tape& t, Node* a, Node* b) {
    if (a->value.cols() != b->value.rows()) throw std::invalid_argument("matmul: shape mismatch");
    const int m = a->value.rows(), k = a->value.cols(), n = b->value.cols();
    Tensor2 out(m, n);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j) {
            double s = 0.0;
            for (int l = 0; l < k; ++l) s += a->value(i, l) * b->value(l, j);
            out(i, j) = s;
        }
    const bool rg = a->requires_grad || b->requires_grad;
    return t.make(std::move(out), [a, b, m, k, n](Node& self) {
        if (a->requires_grad)
            for (int i = 0; i < m; ++i)
                for (int l = 0; l < k; ++l) {
                    double s = 0.0;
                    for (int j = 0; j < n; ++j) s += self.grad(i, j) * b->value(l, j);
                    a->grad(i, l) += s;
                }
        if (b->requires_grad)
            for (int l = 0; l < k; ++l)
                for (int j = 0; j < n; ++j) {
                    double s = 0.0;
                    for (int i = 0; i < m; ++i) s += a->value(i, l) * self.grad(i, j);
                    b->grad(l, j) += s;
                }
    }, rg);
}

Node* add(Tape& t, Node* a, Node* b) {
    check_same_shape(a, b, "add");
    Tensor2 out = a->value;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += b->value[i];
    return t.make(std::move(out), [a, b](Node& self) {
        if (a->requires_grad)
            for (std::size_t i = 0; i < self.grad.size(); ++i) a->grad[i] += self.grad[i];
        if (b->requires_grad)
            for (std::size_t i = 0; i < self.grad.size(); ++i) b->grad[i] += self.grad[i];
    }, a->requires_grad || b->requires_grad);
}

Node* add_rowvec(Tape& t, Node* a, Node* b) {
    if (b->value.rows() != 1 || b->value.cols() != a->value.cols())
        throw std::invalid_argument("add_rowvec: b must be 1 x cols(a)");
    Tensor2 out = a->value;
    for (int i = 0; i < out.rows(); ++i)
        for (int j = 0; j < out.cols(); ++j) out(i, j) += b->value(0, j);
    return t.make(std::move(out), [a, b](Node& self) {
        if (a->requires_grad)
            for (std::size_t i = 0; i < self.grad.size(); ++i) a->grad[i] += self.grad[i];
        if (b->requires_grad)
            for (int i = 0; i < self.grad.rows(); ++i)
                for (int j = 0; j < self.grad.cols(); ++j) b->grad(0, j) += self.grad(i, j);
    }, a->requires_grad || b->requires_grad);
}

Node* sub(Tape& t, Node* a, Node* b) {
    check_same_shape(a, b, "sub");
    Tensor2 out = a->value;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] -= b->value[i];
    return t.make(std::move(out), [a, b](Node& self) {
        if (a->requires_grad)
            for (std::size_t i = 0; i < self.grad.size(); ++i) a->grad[i] += self.grad[i];
        if (b->requires_grad)
            for (std::size_t i = 0; i < self.grad.size(); ++i) b->grad[i] -= self.grad[i];
    }, a->requires_grad || b->requires_grad);
}

Node* hadamard(Tape& t, Node* a, Node* b) {
    check_same_shape(a, b, "hadamard");
    Tensor2 out = a->value;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] *= b->value[i];
    return t.make(std::move(out), [a, b](Node& self) {
        if (a->requires_grad)
            for (std::size_t i = 0; i < self.grad.size(); ++i)
                a->grad[i] += self.grad[i] * b->value[i];
        if (b->requires_grad)
            for (std::size_t i = 0; i < self.grad.size(); ++i)
                b->grad[i] += self.grad[i] * a->value[i];
    }, a->requires_grad || b->requires_grad);
}

Node* scale(Tape& t, Node* a, double s) {
    Tensor2 out = a->value;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] *= s;
    return t.make(std::move(out), [a, s](Node& self) {
        if (a->requires_grad)
            for (std::size_t i = 0; i < self.grad.size(); ++i) a->grad[i] += self.grad[i] * s;
    }, a->requires_grad);
}

Node* add_const(Tape& t, Node* a, double c) {
    Tensor2 out = a->value;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += c;
    return t.make(std::move(out), [a](Node& self) {
        if (a->requires_grad)
            for (std::size_t i = 0; i < self.grad.size(); ++i) a->grad[i] += self.grad[i];
    }, a->requires_grad);
}

Node* tanh_op(Tape& t, Node* a) {
    Tensor2 out = a->value;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::tanh(out[i]);
    return t.make(std::move(out), [a](Node& self) {
        if (a->requires_grad)
            for (std::size_t i = 0; i < self.grad.size(); ++i)
                a->grad[i] += self.grad[i] * (1.0 - self.value[i] * self.value[i]);
    }, a->requires_grad);
}

Node* sigmoid(Tape& t, Node* a) {
    Tensor2 out = a->value;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = 1.0 / (1.0 + std::exp(-out[i]));
    return t.make(std::move(out), [a](Node& self) {
        if (a->requires_grad)
            for (std::size_t i = 0; i < self.grad.size(); ++i)
                a->grad[i] += self.grad[i] * self.value[i] * (1.0 - self.value[i]);
    }, a->requires_grad);
}

Node* softplus(Tape& t, Node* a) {
    Tensor2 out = a->value;
    for (std::size_t i = 0; i < out.size(); ++i) {
        const double x = out[i];
        out[i] = x > 30.0 ? x : std::log1p(std::exp(x));
    }
    return t.make(std::move(out), [a](Node& self) {
        if (a->requires_grad)
            for (std::size_t i = 0; i < self.grad.size(); ++i)
                a->grad[i] += self.grad[i] / (1.0 + std::exp(-a->value[i]));
    }, a->requires_grad);
}

Node* log_op(Tape& t, Node* a) {
    Tensor2 out = a->value;
    for (std::size_t i = 0; i < out.size(); ++i) {
        if (!(out[i] > 0.0)) throw std::domain_error("log_op: non-positive entry");
        out[i] = std::log(out[i]);
    }
    return t.make(std::move(out), [a](Node& self) {
        if (a->requires_grad)
            for (std::size_t i = 0; i < self.grad.size(); ++i)
                a->grad[i] += self.grad[i] / a->value[i];
    }, a->requires_grad);
}

Node* transpose(Tape& t, Node* a) {
    Tensor2 out(a->value.cols(), a->value.rows());
    for (int i = 0; i < a->value.rows(); ++i)
        for (int j = 0; j < a->value.cols(); ++j) out(j, i) = a->value(i, j);
    return t.make(std::move(out), [a](Node& self) {
        if (a->requires_grad)
            for (int i = 0; i < a->grad.rows(); ++i)
                for (int j = 0; j < a->grad.cols(); ++j) a->grad(i, j) += self.grad(j, i);
    }, a->requires_grad);
}

Node* concat_cols(Tape& t, Node* a, Node* b) {
    if (a->value.rows() != 1 || b->value.rows() != 1)
        throw std::invalid_argument("concat_cols: expects row vectors");
    Tensor2 out(1, a->value.cols() + b->value.cols());
    for (int j = 0; j < a->value.cols(); ++j) out(0, j) = a->value(0, j);
    for (int j = 0; j < b->value.cols(); ++j) out(0, a->value.cols() + j) = b->value(0, j);
    const int na = a->value.cols();
    return t.make(std::move(out), [a, b, na](Node& self) {
        if (a->requires_grad)
            for (int j = 0; j < na; ++j) a->grad(0, j) += self.grad(0, j);
        if (b->requires_grad)
            for (int j = 0; j < b->grad.cols(); ++j) b->grad(0, j) += self.grad(0, na + j);
    }, a->requires_grad || b->requires_grad);
}

Node* mean_rows(Tape& t, Node* a) {
    const int m = a->value.rows(), n = a->value.cols();
    if (m == 0) throw std::invalid_argument("mean_rows: empty input");
    Tensor2 out(1, n);
    for (int j = 0; j < n; ++j) {
        double s = 0.0;
        for (int i = 0; i < m; ++i) s += a->value(i, j);
        out(0, j) = s / m;
    }
    return t.make(std::move(out), [a, m, n](Node& self) {
        if (!a->requires_grad) return;
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < n; ++j) a->grad(i, j) += self.grad(0, j) / m;
    }, a->requires_grad);
}

Node* sum_all(Tape& t, Node* a) {
    double s = 0.0;
    for (std::size_t i = 0; i < a->value.size(); ++i) s += a->value[i];
    return t.make(Tensor2(1, 1, s), [a](Node& self) {
        if (a->requires_grad)
            for (std::size_t i = 0; i < a->grad.size(); ++i) a->grad[i] += self.grad[0];
    }, a->requires_grad);
}

Node* mean_all(Tape& t, Node* a) {
    const double n = static_cast<double>(a->value.size());
    if (n == 0) throw std::invalid_argument("mean_all: empty input");
    double s = 0.0;
    for (std::size_t i = 0; i < a->value.size(); ++i) s += a->value[i];
    return t.make(Tensor2(1, 1, s / n), [a, n](Node& self) {
        if (a->requires_grad)
            for (std::size_t i = 0; i < a->grad.size(); ++i) a->grad[i] += self.grad[0] / n;
    }, a->requires_grad);
}

Node* row_softmax(Tape& t, Node* a) {
    Tensor2 out = a->value;
    for (int i = 0; i < out.rows(); ++i) {
        double mx = out(i, 0);
        for (int j = 1; j < out.cols(); ++j) mx = std::max(mx, out(i, j));
        double z = 0.0;
        for (int j = 0; j < out.cols(); ++j) {
            out(i, j) = std::exp(out(i, j) - mx);
            z += out(i, j);
        }
        for (int j = 0; j < out.cols(); ++j) out(i, j) /= z;
    }
    return t.make(std::move(out), [a](Node& self) {
        if (!a->requires_grad) return;
        for (int i = 0; i < self.value.rows(); ++i) {
            double dot = 0.0;
            for (int j = 0; j < self.value.cols(); ++j) dot += self.grad(i, j) * self.value(i, j);
            for (int j = 0; j < self.value.cols(); ++j)
                a->grad(i, j) += self.value(i, j) * (self.grad(i, j) - dot);
        }
    }, a->requires_grad);
}

Node* stack_rows(Tape& t, const std::vector<Node*>& rows) {
    if (rows.empty()) throw std::invalid_argument("stack_rows: no rows");
    const int d = rows.front()->value.cols();
    Tensor2 out(static_cast<int>(rows.size()), d);
    bool rg = false;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i]->value.rows() != 1 || rows[i]->value.cols() != d)
            throw std::invalid_argument("stack_rows: rows must all be 1 x d");
        for (int j = 0; j < d; ++j) out(static_cast<int>(i), j) = rows[i]->value(0, j);
        rg = rg || rows[i]->requires_grad;
    }
    return t.make(std::move(out), [rows, d](Node& self) {
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (!rows[i]->requires_grad) continue;
            for (int j = 0; j < d; ++j)
                rows[i]->grad(0, j) += self.grad(static_cast<int>(i), j);
        }
    }, rg);
}

Node* layer_norm_rows(Tape& t, Node* x, Node* gain, Node* bias, double eps) {
    const int m = x->value.rows(), n = x->value.cols();
    if (gain->value.rows() != 1 || gain->value.cols() != n || bias->value.rows() != 1 ||
        bias->value.cols() != n)
        throw std::invalid_argument("layer_norm_rows: gain/bias must be 1 x cols(x)");
    Tensor2 out(m, n);
    std::vector<double> mu(m), inv_sigma(m);
    for (int i = 0; i < m; ++i) {
        double s = 0.0;
        for (int j = 0; j < n; ++j) s += x->value(i, j);
        mu[i] = s / n;
        double var = 0.0;
        for (int j = 0; j < n; ++j) {
            const double d = x->value(i, j) - mu[i];
            var += d * d;
        }
        var /= n;
        inv_sigma[i] = 1.0 / std::sqrt(var + eps);
        for (int j = 0; j < n; ++j)
            out(i, j) = gain->value(0, j) * (x->value(i, j) - mu[i]) * inv_sigma[i] +
                        bias->value(0, j);
    }
    return t.make(std::move(out),
                  [x, gain, bias, m, n, mu, inv_sigma](Node& self) {
        for (int i = 0; i < m; ++i) {
            // xhat_j = (x_j - mu) * inv_sigma
            double sum_dxhat = 0.0, sum_dxhat_xhat = 0.0;
            std::vector<double> dxhat(n);
            for (int j = 0; j < n; ++j) {
                const double xhat = (x->value(i, j) - mu[i]) * inv_sigma[i];
                dxhat[j] = self.grad(i, j) * gain->value(0, j);
                sum_dxhat += dxhat[j];
                sum_dxhat_xhat += dxhat[j] * xhat;
                if (gain->requires_grad) gain->grad(0, j) += self.grad(i, j) * xhat;
                if (bias->requires_grad) bias->grad(0, j) += self.grad(i, j);
            }
            if (x->requires_grad) {
                for (int j = 0; j < n; ++j) {
                    const double xhat = (x->value(i, j) - mu[i]) * inv_sigma[i];
                    x->grad(i, j) += inv_sigma[i] *
                                     (dxhat[j] - sum_dxhat / n - xhat * sum_dxhat_xhat / n);
                }
            }
        }
    }, x->requires_grad || gain->requires_grad || bias->requires_grad);
}

Node* nll_of_row(Tape& t, Node* p, int label) {
    if (p->value.rows() != 1) throw std::invalid_argument("nll_of_row: expects a 1 x C row");
    if (label < 0 || label >= p->value.cols())
        throw std::invalid_argument("nll_of_row: label out of range");
    const double prob = std::max(p->value(0, label), kProbFloor);
    return t.make(Tensor2(1, 1, -std::log(prob)), [p, label](Node& self) {
        if (!p->requires_grad) return;
        const double raw = p->value(0, label);
        if (raw > kProbFloor) p->grad(0, label) += self.grad[0] * (-1.0 / raw);
    }, p->requires_grad);
}

Node* kl_divergence_op(Tape& t, Node* p, Node* q) {
    check_same_shape(p, q, "kl_divergence");
    if (p->value.rows() != 1) throw std::invalid_argument("kl_divergence: expects 1 x C rows");
    const int n = p->value.cols();
    double z = 0.0;
    for (int j = 0; j < n; ++j) z += std::max(q->value(0, j), kProbFloor);
    double kl = 0.0;
    for (int j = 0; j < n; ++j) {
        const double pj = p->value(0, j);
        if (pj <= 0.0) continue;
        const double qj = std::max(q->value(0, j), kProbFloor) / z;
        kl += pj * std::log(pj / qj);
    }
    return t.make(Tensor2(1, 1, kl), [p, q, n, z](Node& self) {
        const double g = self.grad[0];
        double p_sum = 0.0;
        for (int j = 0; j < n; ++j) p_sum += p->value(0, j);
        for (int j = 0; j < n; ++j) {
            const double pj = p->value(0, j);
            const double mj = std::max(q->value(0, j), kProbFloor);
            if (p->requires_grad && pj > 0.0)
                p->grad(0, j) += g * (std::log(pj) + 1.0 - std::log(mj / z));
            if (q->requires_grad && q->value(0, j) > kProbFloor)
                q->grad(0, j) += g * (p_sum / z - pj / mj);
        }
    }, p->requires_grad || q->requires_grad);
}

namespace {
struct DtwTrace {
    double distance = 0.0;
    std::vector<std::pair<int, int>> path;  // (row in x, row in x_hat)
};

DtwTrace dtw_trace(const Tensor2& x, const Tensor2& xh) {
    const int n = x.rows(), m = xh.rows(), d = x.cols();
    auto cost = [&](int i, int j) {
        double s = 0.0;
        for (int c = 0; c < d; ++c) {
            const double diff = x(i, c) - xh(j, c);
            s += diff * diff;
        }
        return std::sqrt(s);
    };
    std::vector<std::vector<double>> acc(n, std::vector<double>(m, 0.0));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < m; ++j) {
            double best;
            if (i == 0 && j == 0) best = 0.0;
            else if (i == 0) best = acc[0][j - 1];
            else if (j == 0) best = acc[i - 1][0];
            else best = std::min({acc[i - 1][j - 1], acc[i - 1][j], acc[i][j - 1]});
            acc[i][j] = cost(i, j) + best;
        }
    DtwTrace out;
    out.distance = acc[n - 1][m - 1];
    int i = n - 1, j = m - 1;
    out.path.emplace_back(i, j);
    while (i > 0 || j > 0) {
        if (i == 0) --j;
        else if (j == 0) --i;
        else {
            const double diag = acc[i - 1][j - 1], up = acc[i - 1][j], left = acc[i][j - 1];
            if (diag <= up && diag <= left) { --i; --j; }
            else if (up <= left) --i;
            else --j;
        }
        out.path.emplace_back(i, j);
    }
    return out;
}
}  // namespace

Node* dtw_op(Tape& t, Node* x, Node* x_hat) {
    if (x->value.rows() == 0 || x_hat->value.rows() == 0)
        throw std::invalid_argument("dtw_op: empty sequence");
    if (x->value.cols() != x_hat->value.cols())
        throw std::invalid_argument("dtw_op: point dimension mismatch");
    DtwTrace trace = dtw_trace(x->value, x_hat->value);
    return t.make(Tensor2(1, 1, trace.distance),
                  [x, x_hat, path = std::move(trace.path)](Node& self) {
        const double g = self.grad[0];
        const int d = x->value.cols();
        for (const auto& [i, j] : path) {
            double dist = 0.0;
            for (int c = 0; c < d; ++c) {
                const double diff = x->value(i, c) - x_hat->value(j, c);
                dist += diff * diff;
            }
            dist = std::sqrt(dist);
            if (dist <= 0.0) continue;
            for (int c = 0; c < d; ++c) {
                const double diff = x->value(i, c) - x_hat->value(j, c);
                if (x->requires_grad) x->grad(i, c) += g * diff / dist;
                if (x_hat->requires_grad) x_hat->grad(j, c) -= g * diff / dist;
            }
        }
    }, x->requires_grad || x_hat->requires_grad);
}

Node* mse_op(Tape& t, Node* a, Node* b) {
    check_same_shape(a, b, "mse");
    const double n = static_cast<double>(a->value.size());
    if (n == 0) throw std::invalid_argument("mse: empty input");
    double s = 0.0;
    for (std::size_t i = 0; i < a->value.size(); ++i) {
        const double d = a->value[i] - b->value[i];
        s += d * d;
    }
    return t.make(Tensor2(1, 1, s / n), [a, b, n](Node& self) {
        const double g = self.grad[0];
        for (std::size_t i = 0; i < a->value.size(); ++i) {
            const double d = a->value[i] - b->value[i];
            if (a->requires_grad) a->grad[i] += g * 2.0 * d / n;
            if (b->requires_grad) b->grad[i] -= g * 2.0 * d / n;
        }
    }, a->requires_grad || b->requires_grad);
}

Tensor2 softmax_row(const Tensor2& v) {
    Tensor2 out = v;
    for (int i = 0; i < out.rows(); ++i) {
        double mx = out(i, 0);
        for (int j = 1; j < out.cols(); ++j) mx = std::max(mx, out(i, j));
        double z = 0.0;
        for (int j = 0; j < out.cols(); ++j) {
            out(i, j) = std::exp(out(i, j) - mx);
            z += out(i, j);
        }
        for (int j = 0; j < out.cols(); ++j) out(i, j) /= z;
    }
    return out;
}

double kl_divergence(const Tensor2& p, const Tensor2& q) {
    if (!p.same_shape(q)) throw std::invalid_argument("kl_divergence: shape mismatch");
    double z = 0.0;
    for (std::size_t j = 0; j < q.size(); ++j) z += std::max(q[j], kProbFloor);
    double kl = 0.0;
    for (std::size_t j = 0; j < p.size(); ++j) {
        if (p[j] <= 0.0) continue;
        kl += p[j] * std::log(p[j] / (std::max(q[j], kProbFloor) / z));
    }
    return kl;
}

double dtw_distance(const std::vector<std::vector<double>>& x,
                    const std::vector<std::vector<double>>& x_hat) {
    if (x.empty() || x_hat.empty()) throw std::invalid_argument("dtw_distance: empty sequence");
    const int d = static_cast<int>(x.front().size());
    Tensor2 a(static_cast<int>(x.size()), d), b(static_cast<int>(x_hat.size()), d);
    for (int i = 0; i < a.rows(); ++i) {
        if (static_cast<int>(x[i].size()) != d)
            throw std::invalid_argument("dtw_distance: ragged sequence");
        for (int c = 0; c < d; ++c) a(i, c) = x[i][c];
    }
    for (int i = 0; i < b.rows(); ++i) {
        if (static_cast<int>(x_hat[i].size()) != d)
            throw std::invalid_argument("dtw_distance: ragged sequence");
        for (int c = 0; c < d; ++c) b(i, c) = x_hat[i][c];
    }
    return dtw_trace(a, b).distance;
}

double mse(const std::vector<double>& x, const std::vector<double>& x_hat) {
    if (x.size() != x_hat.size()) throw std::invalid_argument("mse: length mismatch");
    if (x.empty()) throw std::invalid_argument("mse: empty input");
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = x_hat[i] - x[i];
        s += d * d;
    }
    return s / static_cast<double>(x.size());
}

}  // namespace gazeforge::tinynn

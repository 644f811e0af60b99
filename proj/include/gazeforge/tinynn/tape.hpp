#pragma once

#include <deque>
#include <functional>
#include <memory>
#include <string>

#include "gazeforge/tinynn/tensor.hpp"

namespace gazeforge::tinynn {

class Tape;

// One value in the computation graph. Created and owned by a Tape; the
// backward closure scatters this node's grad into its inputs' grads.
struct Node {
    Tensor2 value;
    Tensor2 grad;
    bool requires_grad = false;
    std::function<void(Node&)> backward;
    std::string name;  // set for parameter leaves

    double scalar() const {
        if (value.size() != 1) throw std::logic_error("Node::scalar: not a 1x1 node");
        return value[0];
    }
};

// Append-only tape. Nodes are created in topological order, so reverse
// creation order is a valid backward schedule. Summation order inside every
// op is fixed left-to-right for cross-run determinism.
class Tape {
public:
    Node* leaf(Tensor2 value, bool requires_grad = false, std::string name = {});
    Node* make(Tensor2 value, std::function<void(Node&)> backward, bool requires_grad);

    // Seeds root->grad with 1 (root must be 1x1) and runs the tape backward.
    void backward(Node* root);

    std::size_t node_count() const { return nodes_.size(); }

private:
    std::deque<Node> nodes_;
};

// --- elementwise / structural ops -------------------------------------------

Node* matmul(Tape& t, Node* a, Node* b);
Node* add(Tape& t, Node* a, Node* b);           // same shape
Node* add_rowvec(Tape& t, Node* a, Node* b);    // b is 1 x cols, broadcast over rows
Node* sub(Tape& t, Node* a, Node* b);
Node* hadamard(Tape& t, Node* a, Node* b);
Node* scale(Tape& t, Node* a, double s);
Node* add_const(Tape& t, Node* a, double c);
Node* tanh_op(Tape& t, Node* a);
Node* sigmoid(Tape& t, Node* a);
Node* softplus(Tape& t, Node* a);
Node* log_op(Tape& t, Node* a);                 // entries must be > 0
Node* transpose(Tape& t, Node* a);
Node* concat_cols(Tape& t, Node* a, Node* b);   // both 1 x n
Node* mean_rows(Tape& t, Node* a);              // m x n -> 1 x n
Node* sum_all(Tape& t, Node* a);                // -> 1 x 1
Node* mean_all(Tape& t, Node* a);               // -> 1 x 1

// Max-shift stabilized softmax applied to every row independently.
Node* row_softmax(Tape& t, Node* a);

// Stacks 1 x d rows into an n x d matrix.
Node* stack_rows(Tape& t, const std::vector<Node*>& rows);

// Per-row layer normalization with learnable gain/bias (each 1 x cols).
Node* layer_norm_rows(Tape& t, Node* x, Node* gain, Node* bias, double eps = 1e-5);

// --- loss ops ----------------------------------------------------------------

// -log(p[label]) with probability floor 1e-12; p is a 1 x C probability row.
Node* nll_of_row(Tape& t, Node* p, int label);

// KL(P || Q) = sum P_i log(P_i / Q'_i) where Q' is Q floored at 1e-12 and
// renormalized; 0*log0 = 0. P and Q are 1 x C probability rows.
Node* kl_divergence_op(Tape& t, Node* p, Node* q);

// DTW between two coordinate sequences (n x d and m x d), boundary anchored,
// Euclidean point distance. Backward follows the frozen optimal path.
Node* dtw_op(Tape& t, Node* x, Node* x_hat);

// Mean of squared componentwise differences over all entries.
Node* mse_op(Tape& t, Node* a, Node* b);

// --- plain (tape-free) numeric kernels ----------------------------------------

Tensor2 softmax_row(const Tensor2& v);
double kl_divergence(const Tensor2& p, const Tensor2& q);
double dtw_distance(const std::vector<std::vector<double>>& x,
                    const std::vector<std::vector<double>>& x_hat);
double mse(const std::vector<double>& x, const std::vector<double>& x_hat);

}  // namespace gazeforge::tinynn

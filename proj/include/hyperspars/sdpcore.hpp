#pragma once

#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace hyperspars {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

// Which of the two directed-distance formulas is in force. Vertex 0 is the
// designated vertex.
enum class Side { ZeroIn, ZeroOut };

const char* side_name(Side s);

// Ordered triple (i, j, k): T.X = |vi - vj|^2 + |vj - vk|^2 - |vi - vk|^2,
// so j is the middle vertex of the two-hop path i -> j -> k.
struct Triangle {
    int i, j, k;
    bool operator<(const Triangle& o) const {
        return i != o.i ? i < o.i : j != o.j ? j < o.j : k < o.k;
    }
    bool operator==(const Triangle& o) const { return i == o.i && j == o.j && k == o.k; }
};

struct Tolerances {
    double psd_rel = 1e-8;  // tau_psd = psd_rel * |X|
    double chol = 1e-8;
    double norm = 1e-6;
};

// Rank-one updates for quadratic forms; c * |va - vb|^2 and c * |va + vb|^2.
void add_sqdist(Mat& m, int a, int b, double c);
void add_sqsum(Mat& m, int a, int b, double c);

Mat mat_A(int n, int i, int j, Side side);
Mat mat_T(int n, const Triangle& p);
Mat mat_K(const std::vector<double>& omega);

// Accumulate c * A_ij or c * T_p into an existing matrix.
void add_A(Mat& m, int i, int j, Side side, double c);
void add_T(Mat& m, const Triangle& p, double c);

double frob(const Mat& a, const Mat& b);  // A . X

struct GramState {
    Mat X;  // Gram matrix
    Mat V;  // row i is v_i
    Side side = Side::ZeroIn;

    int n() const { return static_cast<int>(X.rows()); }
    double sqdist(int i, int j) const { return (V.row(i) - V.row(j)).squaredNorm(); }
    // |vi -+ v0|^2 with the sign chosen by side.
    double anchor_sqdist(int i) const;
    double directed_distance(int i, int j) const;
    double triangle_form(const Triangle& p) const;
};

class NotPsd : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Factor X = V V^T via a symmetric eigensolve; eigenvalues in [-tau_psd, 0)
// are clamped to zero, anything lower throws NotPsd.
Mat cholesky_embed(const Mat& X, const Tolerances& tol = {});
GramState make_gram(const Mat& X, Side side, const Tolerances& tol = {});

Mat mat_exp(const Mat& m);
double spectral_norm(const Mat& m);
double min_eigenvalue(const Mat& m);
Vec eigenvalues(const Mat& m);

// sum d_i u_i^2 - (sum d_i u_i)^2 with the variance lemma's preconditions
// checked to 1e-9; throws std::invalid_argument on violation.
double variance_form(const Vec& u, const Vec& delta, double delta0);

}  // namespace hyperspars

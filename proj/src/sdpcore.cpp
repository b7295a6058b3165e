#include "hyperspars/sdpcore.hpp"

#include <cmath>
#include <stdexcept>

namespace hyperspars {

const char* side_name(Side s) { return s == Side::ZeroIn ? "in" : "out"; }

void add_sqdist(Mat& m, int a, int b, double c) {
    if (a == b) return;
    m(a, a) += c;
    m(b, b) += c;
    m(a, b) -= c;
    m(b, a) -= c;
}

void add_sqsum(Mat& m, int a, int b, double c) {
    m(a, a) += c;
    m(b, b) += c;
    m(a, b) += c;
    m(b, a) += c;
}

void add_A(Mat& m, int i, int j, Side side, double c) {
    if (i == j) return;
    add_sqdist(m, i, j, c);
    if (side == Side::ZeroIn) {
        add_sqdist(m, i, 0, -c);
        add_sqdist(m, j, 0, c);
    } else {
        add_sqsum(m, i, 0, -c);
        add_sqsum(m, j, 0, c);
    }
}

void add_T(Mat& m, const Triangle& p, double c) {
    add_sqdist(m, p.i, p.j, c);
    add_sqdist(m, p.j, p.k, c);
    add_sqdist(m, p.i, p.k, -c);
}

Mat mat_A(int n, int i, int j, Side side) {
    Mat m = Mat::Zero(n, n);
    add_A(m, i, j, side, 1.0);
    return m;
}

Mat mat_T(int n, const Triangle& p) {
    if (p.i == p.j || p.j == p.k || p.i == p.k) throw std::invalid_argument("triangle vertices must be distinct");
    Mat m = Mat::Zero(n, n);
    add_T(m, p, 1.0);
    return m;
}

Mat mat_K(const std::vector<double>& omega) {
    const int n = static_cast<int>(omega.size());
    Eigen::Map<const Vec> w(omega.data(), n);
    Mat k = -w * w.transpose();
    k.diagonal() += w.sum() * w;
    return k;
}

double frob(const Mat& a, const Mat& b) { return (a.array() * b.array()).sum(); }

double GramState::anchor_sqdist(int i) const {
    return side == Side::ZeroIn ? (V.row(i) - V.row(0)).squaredNorm() : (V.row(i) + V.row(0)).squaredNorm();
}

double GramState::directed_distance(int i, int j) const {
    return sqdist(i, j) - anchor_sqdist(i) + anchor_sqdist(j);
}

double GramState::triangle_form(const Triangle& p) const {
    return sqdist(p.i, p.j) + sqdist(p.j, p.k) - sqdist(p.i, p.k);
}

Mat cholesky_embed(const Mat& X, const Tolerances& tol) {
    Eigen::SelfAdjointEigenSolver<Mat> es(X);
    Vec lam = es.eigenvalues();
    const double scale = lam.cwiseAbs().maxCoeff();
    if (lam.size() > 0 && lam.minCoeff() < -tol.psd_rel * scale)
        throw NotPsd("matrix has eigenvalue " + std::to_string(lam.minCoeff()) + " below -tau_psd");
    lam = lam.cwiseMax(0.0).cwiseSqrt();
    return es.eigenvectors() * lam.asDiagonal();
}

GramState make_gram(const Mat& X, Side side, const Tolerances& tol) {
    GramState g;
    g.X = 0.5 * (X + X.transpose());
    g.V = cholesky_embed(g.X, tol);
    g.side = side;
    return g;
}

Mat mat_exp(const Mat& m) {
    Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (m + m.transpose()));
    Vec e = es.eigenvalues().array().exp();
    return es.eigenvectors() * e.asDiagonal() * es.eigenvectors().transpose();
}

Vec eigenvalues(const Mat& m) {
    Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (m + m.transpose()), Eigen::EigenvaluesOnly);
    return es.eigenvalues();
}

double spectral_norm(const Mat& m) {
    if (m.size() == 0) return 0.0;
    return eigenvalues(m).cwiseAbs().maxCoeff();
}

double min_eigenvalue(const Mat& m) { return eigenvalues(m).minCoeff(); }

double variance_form(const Vec& u, const Vec& delta, double delta0) {
    if (u.size() != delta.size() || u.size() == 0) throw std::invalid_argument("size mismatch");
    if (std::abs(u.sum()) > 1e-9) throw std::invalid_argument("u must sum to 0");
    if (std::abs(u.squaredNorm() - 1.0) > 1e-9) throw std::invalid_argument("u must have unit norm");
    if (std::abs(delta.sum() - 1.0) > 1e-9) throw std::invalid_argument("delta must sum to 1");
    if (!(delta0 > 0) || delta.minCoeff() < delta0 - 1e-15)
        throw std::invalid_argument("delta_i >= delta0 > 0 violated");
    const double mean = delta.dot(u);
    return delta.dot(u.cwiseProduct(u)) - mean * mean;
}

}  // namespace hyperspars

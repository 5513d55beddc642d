#include "atomion/propagator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include <Eigen/Dense>

#include "atomion/errors.hpp"

namespace atomion {

namespace {

void riccati_upward(int ell, double x, double& f0, double& f1, double a0, double a1)
{
    // a0, a1 seed the l = 0, 1 members; returns f_{ell-1}, f_ell.
    double fm = a0, fc = a1;
    if (ell == 0) {
        f0 = 0;
        f1 = a0;
        return;
    }
    for (int l = 1; l < ell; ++l) {
        const double fn = (2 * l + 1) / x * fc - fm;
        fm = fc;
        fc = fn;
    }
    f0 = fm;
    f1 = fc;
}

} // namespace

RiccatiBessel riccati_bessel(int ell, double x)
{
    if (!(x > 0.0) || ell < 0) throw ConfigError("riccati_bessel: need x > 0, ell >= 0");
    const double sx = std::sin(x), cx = std::cos(x);

    // n^ grows with l; upward recurrence is stable.
    double nm, nc;
    riccati_upward(ell, x, nm, nc, -cx, -cx / x - sx);
    const double n = (ell == 0) ? -cx : nc;
    const double np = (ell == 0) ? sx : nm - (ell / x) * n;

    double j, jp;
    if (x > static_cast<double>(ell)) {
        double jm, jc;
        riccati_upward(ell, x, jm, jc, sx, sx / x - cx);
        j = (ell == 0) ? sx : jc;
        jp = (ell == 0) ? cx : jm - (ell / x) * j;
    } else {
        // Downward recurrence seeded high; rescale on the fly to avoid
        // overflow, normalize against the l = 0, 1 closed forms.
        const int lstart = ell + 24 + static_cast<int>(std::sqrt(50.0 * ell));
        double fp = 0.0, fc = 1e-290, tgt = 0.0, tgtm = 0.0;
        for (int l = lstart; l >= 1; --l) {
            const double fm = (2 * l + 1) / x * fc - fp;
            fp = fc;
            fc = fm;
            if (l - 1 == ell) tgt = fc;
            if (l - 1 == ell - 1) tgtm = fc;
            if (std::abs(fc) > 1e250) {
                fp *= 1e-250;
                fc *= 1e-250;
                tgt *= 1e-250;
                tgtm *= 1e-250;
            }
        }
        // fc = f_0, fp = f_1 candidates for normalization.
        const double j0 = sx, j1 = sx / x - cx;
        const double scale = (std::abs(fc) >= std::abs(fp)) ? j0 / fc : j1 / fp;
        j = tgt * scale;
        const double jm = (ell == 0) ? 0.0 : tgtm * scale;
        jp = (ell == 0) ? cx : jm - (ell / x) * j;
    }
    return {j, n, jp, np};
}

double CoupledProblem::wavenumber(int c) const
{
    const double t = channels[static_cast<std::size_t>(c)].threshold;
    return std::sqrt(2.0 * reduced_mass * std::abs(energy - t));
}

namespace {

// U(R) = 2 mu (V(R) - E I) + centrifugal, the coefficient matrix of
// Psi'' = U Psi in the propagation basis. Centrifugal terms are expressed in
// the propagation basis through the asymptotic rotation when present.
class CoefficientMatrix {
  public:
    CoefficientMatrix(const CoupledProblem& p) : p_(p), n_(p.size())
    {
        v_.resize(n_, n_);
        lmat_.resize(n_, n_);
        Eigen::VectorXd lvec(n_);
        for (int c = 0; c < n_; ++c) {
            const double l = p.channels[static_cast<std::size_t>(c)].ell;
            lvec(c) = l * (l + 1.0);
        }
        if (p.asymptotic_rotation.size() > 0) {
            lmat_ = p.asymptotic_rotation * lvec.asDiagonal() *
                    p.asymptotic_rotation.transpose();
        } else {
            lmat_ = lvec.asDiagonal();
        }
        uniform_l_ = true;
        for (int c = 1; c < n_; ++c)
            if (p.channels[static_cast<std::size_t>(c)].ell != p.channels[0].ell) uniform_l_ = false;
    }

    void eval(double r, Eigen::MatrixXd& out)
    {
        p_.potential(r, v_);
        out = 2.0 * p_.reduced_mass * v_;
        const double f = 1.0 / (r * r);
        out.noalias() += f * lmat_;
        out.diagonal().array() -= 2.0 * p_.reduced_mass * p_.energy;
    }

  private:
    const CoupledProblem& p_;
    int n_;
    bool uniform_l_ = true;
    Eigen::MatrixXd v_, lmat_;
};

} // namespace

Eigen::MatrixXd logderiv_propagate(const CoupledProblem& p, double r_min, double r_max,
                                   double step)
{
    const int n = p.size();
    if (n == 0) throw ConfigError("logderiv_propagate: empty channel list");
    if (!(step > 0) || !(r_max > r_min)) throw ConfigError("logderiv_propagate: bad grid");
    const long nsteps = std::lround((r_max - r_min) / step);
    if (nsteps < 2 || nsteps % 2 != 0)
        throw ConfigError("logderiv_propagate: step must divide the range into an even number of intervals");

    CoefficientMatrix coeff(p);
    Eigen::MatrixXd u_a(n, n), u_m(n, n), u_b(n, n);
    Eigen::MatrixXd y = Eigen::MatrixXd::Identity(n, n) * 1e20;
    Eigen::MatrixXd y1(n, n), y2(n, n), y4(n, n), tmp(n, n);
    const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(n, n);

    // Inner-wall precondition: every diagonal element classically forbidden.
    coeff.eval(r_min, u_a);
    for (int c = 0; c < n; ++c) {
        if (u_a(c, c) < 2.0 * p.reduced_mass * 0.05) {
            char buf[160];
            std::snprintf(buf, sizeof buf,
                          "logderiv_propagate: r_min=%.3f not in the classically forbidden "
                          "region for channel %d",
                          r_min, c);
            throw ConfigError(buf);
        }
    }

    const double h = step;
    const long nsect = nsteps / 2;
    coeff.eval(r_min, u_a);
    for (long s = 0; s < nsect; ++s) {
        const double ra = r_min + 2 * s * h;
        coeff.eval(ra + h, u_m);
        coeff.eval(ra + 2 * h, u_b);

        y1 = eye / h + (h / 3.0) * u_a;
        tmp = eye + (h * h / 6.0) * u_m;
        y2 = tmp.partialPivLu().solve(eye) / h; // y2 == y3
        y4 = eye / h + (h / 3.0) * u_b;

        tmp = y + y1;
        y.noalias() = y4 - y2 * tmp.partialPivLu().solve(y2);
        if (!y.allFinite()) {
            char buf[120];
            std::snprintf(buf, sizeof buf,
                          "logderiv_propagate: singular sector update near R=%.4f", ra + h);
            throw PropagationError(buf);
        }
        u_a = u_b;
    }
    return y;
}

namespace {

// Polynomial part of the decaying modified Riccati-Bessel function:
// x k_l(x) * (2/pi) e^{x} = sum_k (l+k)! / (k! (l-k)!) (2x)^-k.
void decaying_poly(int ell, double x, double& p, double& dp)
{
    p = 1.0;
    dp = 0.0;
    double coeff = 1.0;
    for (int k = 1; k <= ell; ++k) {
        coeff *= static_cast<double>((ell + k) * (ell - k + 1)) / (2.0 * k);
        const double term = coeff * std::pow(x, -k);
        p += term;
        dp -= k * term / x;
    }
}

} // namespace

MatchResult match_asymptotic(const Eigen::MatrixXd& y_in, const CoupledProblem& p, double r)
{
    const int n = p.size();
    Eigen::MatrixXd y = y_in;
    if (p.asymptotic_rotation.size() > 0)
        y = p.asymptotic_rotation.transpose() * y_in * p.asymptotic_rotation;

    std::vector<int> open, closed;
    for (int c = 0; c < n; ++c) (p.open(c) ? open : closed).push_back(c);
    if (open.empty()) throw BelowThresholdError("match_asymptotic: no open channels at this energy");
    const int no = static_cast<int>(open.size());

    Eigen::VectorXd F(n), Fp(n), G(n), Gp(n);
    for (int c = 0; c < n; ++c) {
        const int ell = p.channels[static_cast<std::size_t>(c)].ell;
        const double k = p.wavenumber(c);
        const double x = k * r;
        if (p.open(c)) {
            const RiccatiBessel rb = riccati_bessel(ell, x);
            const double sk = std::sqrt(k);
            F(c) = rb.j / sk;
            Fp(c) = rb.jp * sk;
            G(c) = -rb.n / sk;  // G -> cos-like; gives K = tan(delta)
            Gp(c) = -rb.np * sk;
        } else {
            double pl, dpl;
            decaying_poly(ell, x, pl, dpl);
            // d(r') = P(kappa r') e^{-kappa (r'-r)}: unit scale at the match point.
            F(c) = pl;
            Fp(c) = k * dpl - k * pl;
            G(c) = 0.0; // growing solution never enters the solve
            Gp(c) = 0.0;
        }
    }

    // (Y F - F') A = (G' - Y G) B with A = [I; Ac], B = [K; 0]:
    //   [Q_open | -P_closed] [K; Ac] = P_open.
    Eigen::MatrixXd P = y * F.asDiagonal();
    P -= Eigen::MatrixXd(Fp.asDiagonal());
    Eigen::MatrixXd Q = -y * G.asDiagonal();
    Q += Eigen::MatrixXd(Gp.asDiagonal());

    Eigen::MatrixXd M(n, n), rhs(n, no);
    for (int a = 0; a < no; ++a) M.col(a) = Q.col(open[static_cast<std::size_t>(a)]);
    for (std::size_t b = 0; b < closed.size(); ++b)
        M.col(no + static_cast<int>(b)) = -P.col(closed[b]);
    for (int a = 0; a < no; ++a) rhs.col(a) = P.col(open[static_cast<std::size_t>(a)]);

    // Column equilibration; closed-channel columns can be wildly scaled.
    Eigen::VectorXd colscale(n);
    for (int c = 0; c < n; ++c) {
        const double m = M.col(c).cwiseAbs().maxCoeff();
        colscale(c) = (m > 0) ? 1.0 / m : 1.0;
        M.col(c) *= colscale(c);
    }
    Eigen::MatrixXd z = M.partialPivLu().solve(rhs);
    for (int c = 0; c < n; ++c) z.row(c) *= colscale(c);
    if (!z.allFinite()) throw PropagationError("match_asymptotic: singular matching system");

    MatchResult res;
    res.K = z.topRows(no);
    res.open_index = open;
    return res;
}

Eigen::MatrixXcd k_to_s(const Eigen::MatrixXd& k)
{
    const int n = static_cast<int>(k.rows());
    const std::complex<double> i1(0.0, 1.0);
    Eigen::MatrixXcd kc = k.cast<std::complex<double>>();
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Identity(n, n) + i1 * kc;
    Eigen::MatrixXcd b = Eigen::MatrixXcd::Identity(n, n) - i1 * kc;
    return a * b.partialPivLu().inverse();
}

double SMatrixBlock::unitarity_defect() const
{
    const Eigen::MatrixXcd d = S.adjoint() * S - Eigen::MatrixXcd::Identity(S.rows(), S.cols());
    return d.cwiseAbs().maxCoeff();
}

double SMatrixBlock::symmetry_defect() const
{
    const Eigen::MatrixXcd d = S - S.transpose();
    return d.cwiseAbs().maxCoeff();
}

namespace {

double worst_residual(const CoupledProblem& p, double r, Eigen::MatrixXd& vbuf)
{
    p.potential(r, vbuf);
    Eigen::MatrixXd v = vbuf;
    if (p.asymptotic_rotation.size() > 0)
        v = p.asymptotic_rotation.transpose() * vbuf * p.asymptotic_rotation;
    double worst = 0.0;
    for (int c = 0; c < p.size(); ++c) {
        if (!p.open(c)) continue;
        const double t = p.channels[static_cast<std::size_t>(c)].threshold;
        const double eopen = p.energy - t;
        worst = std::max(worst, std::abs(v(c, c) - t) / eopen);
    }
    return worst;
}

} // namespace

SMatrixBlock solve_block(const CoupledProblem& p, const PropagationSettings& s)
{
    Eigen::MatrixXd vbuf(p.size(), p.size());
    double r_max = s.r_max;
    if (s.auto_extend) {
        while (worst_residual(p, r_max, vbuf) > s.match_rel_tol) {
            r_max *= 1.25;
            if (r_max > s.r_max_cap)
                throw PropagationError("solve_block: r_max cap reached before the asymptotic "
                                       "matching precondition was satisfied");
        }
    } else if (worst_residual(p, r_max, vbuf) > s.match_rel_tol) {
        throw ConfigError("solve_block: potential residual too large at r_max");
    }
    // Round up to an even number of whole steps.
    long nsteps = static_cast<long>(std::ceil((r_max - s.r_min) / s.step));
    if (nsteps % 2 != 0) ++nsteps;
    r_max = s.r_min + nsteps * s.step;

    const Eigen::MatrixXd y = logderiv_propagate(p, s.r_min, r_max, s.step);
    const MatchResult m = match_asymptotic(y, p, r_max);

    SMatrixBlock block;
    block.energy = p.energy;
    block.K = m.K;
    block.S = k_to_s(m.K);
    block.open_index = m.open_index;
    for (int idx : m.open_index) block.open_channels.push_back(p.channels[static_cast<std::size_t>(idx)]);
    block.r_max_used = r_max;
    return block;
}

CoupledProblem make_fcqs_problem(const PotentialSurfaceSet& surface, int ell, double energy)
{
    static const std::vector<int> kets = {1, 2, 3, 4};
    CoupledProblem p;
    p.reduced_mass = surface.reduced_mass();
    p.energy = energy;

    // Asymptotic eigenbasis: thresholds and channel labels.
    Eigen::MatrixXd vinf;
    surface.case_a_block_into(kets, 1e8, vinf);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(vinf);
    Eigen::MatrixXd u = es.eigenvectors();
    for (int c = 0; c < 4; ++c) { // deterministic sign
        int imax;
        u.col(c).cwiseAbs().maxCoeff(&imax);
        if (u(imax, c) < 0) u.col(c) = -u.col(c);
    }
    p.asymptotic_rotation = u;
    const char* names[4] = {"S+S", "Ion+S", "S+D(3/2)", "S+D(5/2)"};
    for (int c = 0; c < 4; ++c)
        p.channels.push_back({names[c], ell, es.eigenvalues()(c)});

    p.potential = [&surface](double r, Eigen::MatrixXd& out) {
        surface.case_a_block_into(kets, r, out);
    };
    return p;
}

CoupledProblem make_mcqs_problem(const PotentialSurfaceSet& surface, int J, int parity,
                                 double energy)
{
    auto ft = std::make_shared<FrameTransform>(frame_transform(J, parity, surface.thresholds()));
    CoupledProblem p;
    p.reduced_mass = surface.reduced_mass();
    p.energy = energy;
    for (const auto& ch : ft->rows) {
        char label[64];
        std::snprintf(label, sizeof label, "%s j=%s l=%d", asymptote_name(ch.asym),
                      ch.j.str().c_str(), ch.ell);
        std::string full = label;
        if (ch.asym == Asymptote::SD)
            full = std::string(ch.sd52() ? "S+D(5/2)" : "S+D(3/2)") + " j=" + ch.j.str() +
                   " l=" + std::to_string(ch.ell);
        p.channels.push_back({full, ch.ell, ch.threshold});
    }
    struct Workspace {
        Eigen::MatrixXd va, tmp;
    };
    auto ws = std::make_shared<Workspace>();
    p.potential = [&surface, ft, ws](double r, Eigen::MatrixXd& out) {
        surface.case_a_block_into(ft->cols, r, ws->va);
        ws->tmp.noalias() = ft->matrix * ws->va;
        out.noalias() = ws->tmp * ft->matrix.transpose();
    };
    return p;
}

} // namespace atomion

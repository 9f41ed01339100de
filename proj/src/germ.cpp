#include "helm/germ.hpp"

#include "helm/linalg.hpp"

#include <cmath>

namespace helm {

std::string to_string(Variant v) {
    switch (v) {
    case Variant::PQ: return "pq";
    case Variant::PV_A: return "pv-a";
    case Variant::PV_B: return "pv-b";
    case Variant::PV_REFLECT: return "pv-reflect";
    }
    return "?";
}

Variant parse_variant(const std::string& s) {
    if (s == "pq") return Variant::PQ;
    if (s == "pv-a") return Variant::PV_A;
    if (s == "pv-b") return Variant::PV_B;
    if (s == "pv-reflect") return Variant::PV_REFLECT;
    throw std::invalid_argument("unknown variant '" + s + "'");
}

int default_precision_bits(int max_degree) { return max_degree <= 200 ? 512 : 3328; }

double real_q_tolerance(int mantissa_bits) { return std::pow(10.0, -0.25 * mantissa_bits * std::log10(2.0)); }

ExpLoadCurrent::ExpLoadCurrent(Complex kappa, int m, int n, const Real& v_ref)
    : kappa_(std::move(kappa)),
      quadratic_(m == 1 && n == 1),
      vpow_(Real(m) / Real(2 * n), Complex(boost::multiprecision::pow(v_ref, Real(m) / Real(2 * n)))),
      wpow_(Real(1) - Real(m) / Real(2 * n),
            Complex(boost::multiprecision::pow(v_ref, Real(m) / Real(2 * n) - 1))) {
    if (n < 1 || m < 0) throw GermError("load exponent must satisfy m >= 0, n >= 1");
    // x_0 = kappa * V_r^((m - n) / n)
    x_.push_back(kappa_ * (vpow_.coeffs()[0] * wpow_.coeffs()[0]));
}

const Complex& ExpLoadCurrent::next(const std::vector<Complex>& c, const std::vector<Complex>& w) {
    const std::size_t k = x_.size();
    if (x_[0].is_zero()) throw GermError("load current with zero constant term");
    if (quadratic_) {
        Complex acc = kappa_ * kappa_ * cauchy_coeff(c, w, k);
        for (std::size_t j = 1; j < k; ++j) acc -= x_[k - j] * x_[j];
        x_.push_back(acc / (x_[0] * Real(2)));
    } else {
        vpow_.next(c);
        wpow_.next(w);
        x_.push_back(kappa_ * cauchy_coeff(vpow_.coeffs(), wpow_.coeffs(), k));
    }
    return x_.back();
}

Complex exp_load_current_next(const std::vector<Complex>& c, const std::vector<Complex>& d,
                              const std::vector<Complex>& x, const Complex& kappa, int m, int n, std::size_t k) {
    if (c.size() <= k || d.size() <= k) throw GermError("exp_load_current_next: prefixes too short");
    if (k == 0) {
        ExpLoadCurrent cur(kappa, m, n, c[0].real());
        return cur.coeffs()[0];
    }
    if (x.empty() || x[0].is_zero()) throw GermError("load current with zero constant term");
    std::vector<Complex> w;
    w.reserve(k + 1);
    for (std::size_t j = 0; j <= k; ++j) w.push_back(conj(d[j]));
    if (m == 1 && n == 1) {
        if (x.size() < k) throw GermError("exp_load_current_next: current prefix too short");
        Complex acc = kappa * kappa * cauchy_coeff(c, w, k);
        for (std::size_t j = 1; j < k; ++j) acc -= x[k - j] * x[j];
        return acc / (x[0] * Real(2));
    }
    ExpLoadCurrent cur(kappa, m, n, c[0].real());
    for (std::size_t j = 1; j <= k; ++j) cur.next(c, w);
    return cur.coeffs()[k];
}

namespace {

struct LoadCurrentTerm {
    std::size_t bus;
    ExpLoadCurrent current;
};

class GermBuilder {
public:
    GermBuilder(const Network& net, const PrecisionConfig& cfg, Variant variant)
        : net_(net), variant_(variant), bits_(cfg.mantissa_bits), N_(static_cast<std::size_t>(cfg.max_degree)) {
        if (cfg.max_degree < 1) throw GermError("max_degree must be at least 1");
        if (cfg.mantissa_bits < 64) throw GermError("mantissa_bits too small");
    }

    SeriesSet run() {
        PrecisionScope scope(bits_);
        setup();
        if (variant_ == Variant::PV_B)
            run_b();
        else
            run_a();
        return finish();
    }

private:
    void setup() {
        const std::size_t nb = net_.size();
        r_ = net_.slack_index();
        vr_ = Real(net_.slack().v_ref.real());
        y_ = admittance_mp(net_);
        pos_.assign(nb, SIZE_MAX);
        for (std::size_t i = 0; i < nb; ++i)
            if (i != r_) {
                pos_[i] = order_.size();
                order_.push_back(i);
            }
        c_.assign(nb, {});
        d_.assign(nb, {});
        w_.assign(nb, {});
        for (std::size_t i = 0; i < nb; ++i) {
            c_[i].push_back(Complex(vr_));
            d_[i].push_back(Complex(Real(1) / vr_));
            w_[i].push_back(d_[i][0]);
        }
        for (std::size_t i = 0; i < nb; ++i) {
            const Bus& b = net_.buses()[i];
            if (b.kind == BusKind::PV) pv_.push_back(i);
            if (b.kind != BusKind::ExpLoad) continue;
            for (const LoadComponent& l : b.loads) {
                Complex s0(l.s0);
                if (l.mp == l.mq && l.np == l.nq) {
                    if (!s0.is_zero()) loads_.push_back({i, ExpLoadCurrent(conj(s0), l.mp, l.np, vr_)});
                    continue;
                }
                if (l.s0.real() != 0.0) loads_.push_back({i, ExpLoadCurrent(Complex(s0.real()), l.mp, l.np, vr_)});
                if (l.s0.imag() != 0.0)
                    loads_.push_back({i, ExpLoadCurrent(Complex(Real(0), -s0.imag()), l.mq, l.nq, vr_)});
            }
        }
        if (variant_ == Variant::PQ && !pv_.empty()) throw GermError("PQ germ requested for a network with PV buses");
    }

    // Stage matrix for the voltage unknowns: rows and columns of Y without the slack.
    ComplexMatrix reduced_y(bool conjugate) const {
        const std::size_t m = order_.size();
        ComplexMatrix a(m, m);
        for (std::size_t p = 0; p < m; ++p)
            for (std::size_t q = 0; q < m; ++q)
                a(p, q) = conjugate ? conj(y_(order_[p], order_[q])) : y_(order_[p], order_[q]);
        return a;
    }

    // Load currents summed per bus, coefficient k (already computed).
    Complex load_current(std::size_t bus, std::size_t k) const {
        Complex acc;
        for (const auto& t : loads_)
            if (t.bus == bus) acc += t.current.coeffs()[k];
        return acc;
    }

    // Advance all load currents to coefficient k (requires c, w through k).
    void advance_loads(std::size_t k) {
        for (auto& t : loads_)
            while (t.current.size() <= k) t.current.next(c_[t.bus], w_[t.bus]);
    }

    void push_voltage(std::size_t i, Complex cn) {
        c_[i].push_back(std::move(cn));
        const std::size_t n = c_[i].size() - 1;
        d_[i].push_back(reciprocal_next(c_[i], d_[i], n));
        w_[i].push_back(conj(d_[i].back()));
    }

    // Conjugate-neighborhood sum K_i[n] = sum_{k in N(i)} conj(Y_ik) conj(c_k[n]), optionally including i.
    Complex neighbor_conj_sum(std::size_t i, std::size_t n, bool closed) const {
        Complex acc;
        for (std::size_t k = 0; k < net_.size(); ++k) {
            if (k == i && !closed) continue;
            if (y_(i, k).is_zero()) continue;
            acc += conj(y_(i, k)) * conj(c_[k][n]);
        }
        return acc;
    }

    Complex neighbor_sum(std::size_t i, std::size_t n) const {
        Complex acc;
        for (std::size_t k = 0; k < net_.size(); ++k) {
            if (k == i || y_(i, k).is_zero()) continue;
            acc += y_(i, k) * c_[k][n];
        }
        return acc;
    }

    // Approaches A and reflection share one stage matrix with PQ and load rows.
    void run_a() {
        const std::size_t m = order_.size();
        std::optional<LuFactorization> lu;
        if (m > 0) {
            lu.emplace(reduced_y(false));
            pivot_ratio_ = lu->pivot_ratio();
        }
        const bool reflect = variant_ == Variant::PV_REFLECT;
        std::map<std::size_t, PvState> pv;
        for (std::size_t i : pv_) pv[i] = PvState{};
        if (!reflect)
            for (std::size_t i : pv_) pv_a_stage(i, 0, pv[i]);
        else
            for (std::size_t i : pv_) reflect_stage(i, 0, pv[i]);

        for (std::size_t n = 1; n <= N_; ++n) {
            advance_loads(n - 1);
            ComplexVector rhs(m);
            for (std::size_t p = 0; p < m; ++p) {
                const std::size_t i = order_[p];
                const Bus& b = net_.buses()[i];
                switch (b.kind) {
                case BusKind::PQ: rhs[p] = conj(Complex(b.s)) * w_[i][n - 1]; break;
                case BusKind::ExpLoad: rhs[p] = load_current(i, n - 1); break;
                case BusKind::PV: {
                    const PvState& st = pv[i];
                    if (reflect) {
                        Real m2 = Real(b.m_set) * Real(b.m_set);
                        Complex t = c_[i][n - 1] * (Real(2) * Real(b.p)) - cauchy_coeff(st.sq, st.kt, n - 1);
                        rhs[p] = t / m2;
                    } else {
                        Complex acc;
                        for (std::size_t j = 0; j < n; ++j) acc += conj(st.g[j]) * w_[i][n - 1 - j];
                        rhs[p] = acc;
                    }
                    break;
                }
                case BusKind::Slack: break;
                }
            }
            ComplexVector sol = m ? lu->solve(rhs) : ComplexVector{};
            for (std::size_t p = 0; p < m; ++p) push_voltage(order_[p], std::move(sol[p]));
            c_[r_].push_back(Complex());
            d_[r_].push_back(Complex());
            w_[r_].push_back(Complex());
            for (std::size_t i : pv_) {
                if (reflect)
                    reflect_stage(i, n, pv[i]);
                else
                    pv_a_stage(i, n, pv[i]);
            }
        }
        advance_loads(N_);
        for (auto& [i, st] : pv) {
            if (reflect) continue;
            vbar_[i] = PowerSeries(st.cbar);
            s_[i] = PowerSeries(st.g);
        }
    }

    struct PvState {
        std::vector<Complex> k;     // sum over neighbors of conj(Y) conj(c)
        std::vector<Complex> a;     // neighbor sum + conj(Y_ii) V_i
        std::vector<Complex> vk;    // V_i * K_i
        std::vector<Complex> cbar;  // conjugate-voltage series
        std::vector<Complex> t;     // conj(Y_ii) cbar + K
        std::vector<Complex> g;     // complex power S_i(z)
        std::vector<Complex> sq;    // V_i^2 (reflection)
        std::vector<Complex> kt;    // closed-neighborhood conjugate sum (reflection)
    };

    void pv_a_stage(std::size_t i, std::size_t n, PvState& st) {
        const Bus& b = net_.buses()[i];
        const Complex& yii = y_(i, i);
        st.k.push_back(neighbor_conj_sum(i, n, false));
        st.a.push_back(neighbor_sum(i, n) + conj(yii) * c_[i][n]);
        st.vk.push_back(cauchy_coeff(c_[i], st.k, n));
        Complex bn = -st.vk[n];
        if (n == 0) {
            Real m2 = Real(b.m_set) * Real(b.m_set);
            bn += Complex(Real(2) * Real(b.p)) - yii * m2;
        }
        if (n == 0 && abs(st.a[0]) <= singular_threshold(abs(yii)))
            throw GermError("singular PV stage at bus " + std::to_string(b.id) + " (purely resistive connection)");
        for (std::size_t j = 0; j < n; ++j) bn -= st.cbar[j] * st.a[n - j];
        st.cbar.push_back(bn / st.a[0]);
        st.t.push_back(conj(yii) * st.cbar[n] + st.k[n]);
        st.g.push_back(cauchy_coeff(c_[i], st.t, n));
    }

    void reflect_stage(std::size_t i, std::size_t n, PvState& st) {
        st.sq.push_back(cauchy_coeff(c_[i], c_[i], n));
        st.kt.push_back(neighbor_conj_sum(i, n, true));
    }

    void run_b() {
        const std::size_t m = order_.size();
        const std::size_t g = pv_.size();
        const std::size_t dim = 2 * m + g;
        std::vector<std::size_t> pv_pos(net_.size(), SIZE_MAX);
        for (std::size_t j = 0; j < g; ++j) pv_pos[pv_[j]] = j;

        ComplexMatrix a(dim, dim);
        for (std::size_t p = 0; p < m; ++p)
            for (std::size_t q = 0; q < m; ++q) {
                a(p, q) = y_(order_[p], order_[q]);
                a(m + p, m + q) = conj(y_(order_[p], order_[q]));
            }
        const Complex w0 = Complex(Real(1) / vr_);
        for (std::size_t j = 0; j < g; ++j) {
            const std::size_t p = pos_[pv_[j]];
            a(p, 2 * m + j) = w0;
            a(m + p, 2 * m + j) = -w0;
            a(2 * m + j, p) = Complex(vr_);
            a(2 * m + j, m + p) = Complex(vr_);
        }
        LuFactorization lu(std::move(a));
        pivot_ratio_ = lu.pivot_ratio();

        const std::size_t nb = net_.size();
        std::vector<std::vector<Complex>> cbar(nb), dbar(nb), wbar(nb), gs(nb);
        for (std::size_t i = 0; i < nb; ++i) {
            cbar[i].push_back(Complex(vr_));
            dbar[i].push_back(Complex(Real(1) / vr_));
            wbar[i].push_back(dbar[i][0]);
        }
        const std::size_t top = N_ + 1;
        for (std::size_t n = 1; n <= top; ++n) {
            advance_loads(n - 1);
            ComplexVector rhs(dim);
            for (std::size_t p = 0; p < m; ++p) {
                const std::size_t i = order_[p];
                const Bus& b = net_.buses()[i];
                switch (b.kind) {
                case BusKind::PQ:
                    rhs[p] = conj(Complex(b.s)) * w_[i][n - 1];
                    rhs[m + p] = Complex(b.s) * wbar[i][n - 1];
                    break;
                case BusKind::ExpLoad: {
                    Complex x = load_current(i, n - 1);
                    rhs[m + p] = conj(x);
                    rhs[p] = std::move(x);
                    break;
                }
                case BusKind::PV: {
                    Complex acc, accbar;
                    if (n == 1) acc = w_[i][0] * (Real(2) * Real(b.p));
                    for (std::size_t j = 0; j + 1 < n; ++j) {
                        acc += conj(gs[i][j]) * w_[i][n - 1 - j];
                        accbar += gs[i][j] * wbar[i][n - 1 - j];
                    }
                    rhs[p] = acc;
                    rhs[m + p] = accbar;
                    Complex vm;
                    if (n == 1) vm = Complex(Real(b.m_set) * Real(b.m_set) - vr_ * vr_);
                    for (std::size_t j = 1; j < n; ++j) vm -= c_[i][j] * cbar[i][n - j];
                    rhs[2 * m + pv_pos[i]] = vm;
                    break;
                }
                case BusKind::Slack: break;
                }
            }
            ComplexVector sol = lu.solve(rhs);
            for (std::size_t p = 0; p < m; ++p) {
                const std::size_t i = order_[p];
                push_voltage(i, sol[p]);
                cbar[i].push_back(sol[m + p]);
                dbar[i].push_back(reciprocal_next(cbar[i], dbar[i], n));
                wbar[i].push_back(conj(dbar[i].back()));
            }
            for (std::size_t j = 0; j < g; ++j) gs[pv_[j]].push_back(sol[2 * m + j]);
            c_[r_].push_back(Complex());
            d_[r_].push_back(Complex());
            w_[r_].push_back(Complex());
            cbar[r_].push_back(Complex());
            dbar[r_].push_back(Complex());
        }
        advance_loads(N_);
        for (std::size_t i = 0; i < nb; ++i) {
            c_[i].resize(N_ + 1);
            d_[i].resize(N_ + 1);
            w_[i].resize(N_ + 1);
            if (i == r_) continue;
            cbar[i].resize(N_ + 1);
            dbar[i].resize(N_ + 1);
            vbar_[i] = PowerSeries(cbar[i]);
            dbar_[i] = PowerSeries(dbar[i]);
        }
        for (std::size_t i : pv_) s_[i] = PowerSeries(gs[i]);
    }

    SeriesSet finish() {
        SeriesSet out;
        out.variant = variant_;
        out.mantissa_bits = bits_;
        out.stage_pivot_ratio = pivot_ratio_;
        for (std::size_t i = 0; i < net_.size(); ++i) {
            out.v.emplace_back(c_[i]);
            out.d.emplace_back(d_[i]);
        }
        out.vbar = std::move(vbar_);
        out.dbar = std::move(dbar_);
        out.s = std::move(s_);
        for (const auto& t : loads_) {
            auto& ser = out.i_load[t.bus];
            if (ser.empty()) ser.resize(N_ + 1);
            for (std::size_t k = 0; k <= N_; ++k) ser[k] += t.current.coeffs()[k];
        }
        double worst = 0.0;
        for (const auto& [i, ser] : out.s)
            for (std::size_t n = 1; n < ser.size(); ++n) {
                Real mag = abs(ser[n]);
                Real denom = mag > 1 ? mag : Real(1);
                double r = to_double(boost::multiprecision::abs(ser[n].real()) / denom);
                if (r > worst) worst = r;
            }
        out.real_q_residual = worst;
        if (worst > real_q_tolerance(bits_))
            throw GermError("reactive-power series not real-valued (residual " + std::to_string(worst) + ")");
        return out;
    }

    const Network& net_;
    Variant variant_;
    int bits_;
    std::size_t N_;
    std::size_t r_ = 0;
    Real vr_;
    ComplexMatrix y_;
    std::vector<std::size_t> pos_;
    std::vector<std::size_t> order_;
    std::vector<std::size_t> pv_;
    std::vector<std::vector<Complex>> c_, d_, w_;
    std::vector<LoadCurrentTerm> loads_;
    std::map<std::size_t, PowerSeries> vbar_, dbar_, s_;
    double pivot_ratio_ = 1.0;
};

void require_kinds(const Network& net, bool allow_pv, bool allow_exp, const char* what) {
    for (const Bus& b : net.buses()) {
        if (b.kind == BusKind::PV && !allow_pv) throw GermError(std::string(what) + ": PV buses not supported");
        if (b.kind == BusKind::ExpLoad && !allow_exp)
            throw GermError(std::string(what) + ": exponential loads not supported");
    }
}

}  // namespace

SeriesSet develop_germ(const Network& net, const PrecisionConfig& cfg, Variant variant) {
    try {
        return GermBuilder(net, cfg, variant).run();
    } catch (const SingularMatrixError& e) {
        throw GermError(std::string("singular stage system: ") + e.what());
    } catch (const SeriesError& e) {
        throw GermError(e.what());
    }
}

SeriesSet germ_pq(const Network& net, const PrecisionConfig& cfg) {
    require_kinds(net, false, false, "germ_pq");
    return develop_germ(net, cfg, Variant::PQ);
}

SeriesSet germ_pv_a(const Network& net, const PrecisionConfig& cfg) {
    require_kinds(net, true, false, "germ_pv_a");
    return develop_germ(net, cfg, Variant::PV_A);
}

SeriesSet germ_pv_b(const Network& net, const PrecisionConfig& cfg) {
    require_kinds(net, true, false, "germ_pv_b");
    return develop_germ(net, cfg, Variant::PV_B);
}

SeriesSet germ_pv_reflection(const Network& net, const PrecisionConfig& cfg) {
    require_kinds(net, true, false, "germ_pv_reflection");
    return develop_germ(net, cfg, Variant::PV_REFLECT);
}

SeriesSet germ_exp(const Network& net, const PrecisionConfig& cfg, Variant pv_variant) {
    Variant v = pv_variant;
    if (v == Variant::PQ && net.has_kind(BusKind::PV)) v = Variant::PV_A;
    return develop_germ(net, cfg, v);
}

std::optional<QLimitDirective> q_limit_switch(const Network& net, int bus_id, double q_at_one) {
    const Bus& b = net.buses()[net.index_of(bus_id)];
    if (b.kind != BusKind::PV) return std::nullopt;
    if (b.q_max && q_at_one > *b.q_max) return QLimitDirective{bus_id, cd(b.p, *b.q_max)};
    if (b.q_min && q_at_one < *b.q_min) return QLimitDirective{bus_id, cd(b.p, *b.q_min)};
    return std::nullopt;
}

}  // namespace helm

#include "ffm/lfam.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <ctime>
#include <numeric>
#include <sstream>

#include "ffm/budget.hpp"
#include "ffm/parallel.hpp"
#include "ffm/witt.hpp"

namespace ffm {

std::shared_ptr<const CycloField> FamilyData::field() const {
    return CycloField::get(p, witt_length(p, 1, n));
}

size_t FamilyData::expected_size() const {
    size_t s = 1;
    for (uint32_t i = 0; i + 1 < n; ++i) s *= p;
    return s * (p - 1);
}

double build_cost(uint32_t p, uint32_t n) {
    double family = (std::pow(double(p), double(n)) - std::pow(double(p), double(n - 1)));
    double per_char = 0;
    for (uint32_t d = 0; d < n; ++d) per_char += std::pow(double(p), double(d));
    return family * per_char;
}

std::string build_timestamp() {
    if (const char* env = std::getenv("FFMOMENTS_BUILD_TIME")) return env;
    std::time_t now = std::time(nullptr);
    std::tm tm_utc;
    gmtime_r(&now, &tm_utc);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
    return buf;
}

static std::string b_to_string(const std::vector<uint32_t>& b) {
    std::ostringstream os;
    os << "(";
    for (size_t i = 0; i < b.size(); ++i) os << (i ? "," : "") << b[i];
    os << ")";
    return os.str();
}

FamilyData build_family(uint32_t p, uint32_t n, uint32_t psi_tag, unsigned threads,
                        double budget, bool force) {
    double cost = build_cost(p, n);
    if (cost > budget && !force) {
        std::ostringstream os;
        os << "family build needs ~" << cost << " character evaluations (budget " << budget
           << "); pass force to proceed";
        throw BudgetError(os.str(), cost);
    }
    CharacterContext ctx(p, n, psi_tag);
    auto fld = CycloField::get(p, ctx.L());

    // Reversals of monic polynomials of degree d < n are exactly the units
    // supported on x^1..x^d, and their dense indices fill [0, p^d). Decompose
    // each such unit once; per character only the Witt pairing remains.
    uint64_t table_size = 1;
    for (uint32_t d = 0; d + 1 < n; ++d) table_size *= p;
    std::vector<std::vector<uint64_t>> profiles(table_size);
    for (uint64_t idx = 0; idx < table_size; ++idx)
        profiles[idx] = ctx.unit_profile(TruncatedUnit::from_dense_index(p, n, idx));

    // Primitive points in lexicographic (b_1,...,b_n) order; b_n != 0 is
    // cross-validated against the direct primitivity test for every point.
    uint64_t pn = table_size * p;
    std::vector<uint64_t> primitive_idx;
    primitive_idx.reserve(size_t(pn - pn / p));
    std::vector<uint64_t> pow(n);
    pow[n - 1] = 1;
    for (uint32_t j = n - 1; j > 0; --j) pow[j - 1] = pow[j] * p;
    for (uint64_t k = 0; k < pn; ++k) {
        std::vector<uint32_t> b(n);
        for (uint32_t j = 0; j < n; ++j) b[j] = uint32_t((k / pow[j]) % p);
        CharacterPoint pt(ctx, b);
        if (is_primitive(ctx, pt)) primitive_idx.push_back(k);
    }

    auto map_chunk = [&](size_t lo, size_t hi) {
        std::vector<LFunctionRecord> out;
        out.reserve(hi - lo);
        for (size_t i = lo; i < hi; ++i) {
            uint64_t k = primitive_idx[i];
            std::vector<uint32_t> b(n);
            for (uint32_t j = 0; j < n; ++j) b[j] = uint32_t((k / pow[j]) % p);
            CharacterPoint pt(ctx, b);
            LFunctionRecord rec;
            rec.b = b;
            rec.c.reserve(n);
            uint64_t pd = 1;
            for (uint32_t d = 0; d < n; ++d) {
                CycloScalar cd(fld);
                for (uint64_t idx = 0; idx < pd; ++idx)
                    cd.add_root(character_eval_profile(ctx, pt, profiles[idx]));
                rec.c.push_back(std::move(cd));
                pd *= p;
            }
            out.push_back(std::move(rec));
        }
        return out;
    };
    auto merge = [](std::vector<LFunctionRecord> acc, std::vector<LFunctionRecord> part) {
        for (auto& r : part) acc.push_back(std::move(r));
        return acc;
    };

    FamilyData fam;
    fam.p = p;
    fam.n = n;
    fam.psi_tag = psi_tag;
    fam.created = build_timestamp();
    fam.records = parallel_map_reduce(primitive_idx.size(), std::vector<LFunctionRecord>{},
                                      map_chunk, merge, threads);
    if (fam.records.size() != fam.expected_size())
        throw std::logic_error("family size mismatch against p^n - p^{n-1}");
    return fam;
}

RecordDiagnostics check_record(const LFunctionRecord& rec, uint32_t p, uint32_t n,
                               double tol) {
    auto fail = [&](const std::string& what) {
        throw std::logic_error("record " + b_to_string(rec.b) + ": " + what);
    };
    if (rec.c.size() != n) fail("expected n coefficients");
    const auto& fld = rec.c[0].field();

    auto q_power = [&](uint32_t e) {
        Int128 v = 1;
        for (uint32_t i = 0; i < e; ++i) v *= p;
        return v;
    };
    if (!(rec.c[0] == CycloScalar::from_int(fld, 1))) fail("c_0 != 1");

    auto nm = rec.c[n - 1].norm_check();
    if (!nm || *nm != q_power(n - 1)) fail("|c_{n-1}|^2 != q^{n-1}");

    for (uint32_t d = 0; d < n; ++d) {
        CycloScalar lhs = rec.c[n - 1 - d];
        lhs.scale(q_power(d));
        CycloScalar rhs = rec.c[n - 1] * rec.c[d].conj();
        if (!(lhs == rhs)) fail("functional equation fails at d = " + std::to_string(d));
    }

    // Roots of L(u) = sum_d c_d u^d: companion eigenvalues seed a Newton
    // polish in extended precision. The polynomials do have exact repeated
    // roots (discriminant 0 occurs already at p=3, n=4), where a bare
    // eigensolve is only sqrt(eps)-accurate; eigenvalue clusters are polished
    // against the (mu-1)-th derivative instead, after verifying the lower
    // derivatives vanish to working precision. If that verification fails the
    // cluster is treated as simple roots, which can only overstate the
    // deviation, never hide one.
    uint32_t deg = n - 1;
    RecordDiagnostics diag;
    if (deg > 0) {
        using CLD = std::complex<long double>;
        std::vector<CLD> coef(deg + 1);
        for (uint32_t i = 0; i <= deg; ++i) {
            const auto z = rec.c[i].embed();
            coef[i] = CLD(z.real(), z.imag());
        }
        // Derivative coefficient rows: dc[j] holds L^{(j)}.
        std::vector<std::vector<CLD>> dc{coef};
        for (uint32_t j = 1; j <= deg; ++j) {
            const auto& prev = dc.back();
            std::vector<CLD> next(prev.size() - 1);
            for (size_t i = 1; i < prev.size(); ++i)
                next[i - 1] = static_cast<long double>(i) * prev[i];
            dc.push_back(std::move(next));
        }
        auto horner = [](const std::vector<CLD>& c, CLD u) {
            CLD acc = 0;
            for (size_t i = c.size(); i-- > 0;) acc = acc * u + c[i];
            return acc;
        };
        auto scale_at = [](const std::vector<CLD>& c, long double au) {
            long double s = 0, up = 1;
            for (const CLD& ci : c) {
                s += std::abs(ci) * up;
                up *= au;
            }
            return s;
        };
        auto newton = [&](const std::vector<CLD>& f, const std::vector<CLD>& fp, CLD u) {
            for (int it = 0; it < 80; ++it) {
                const CLD fv = horner(f, u);
                const CLD dv = horner(fp, u);
                if (std::abs(dv) == 0) break;
                const CLD step = fv / dv;
                u -= step;
                if (std::abs(step) < 1e-18L * std::max<long double>(std::abs(u), 1e-30L)) break;
            }
            return u;
        };

        Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(deg, deg);
        std::complex<double> lead = rec.c[deg].embed();
        for (uint32_t i = 0; i < deg; ++i) {
            comp(i, deg - 1) = -rec.c[i].embed() / lead;
            if (i + 1 < deg) comp(i + 1, i) = 1.0;
        }
        Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(comp, false);

        // Greedy clustering of the eigenvalues; the threshold is far above the
        // sqrt(eps) splitting of an exact multiple root and far below any
        // distinct-root separation at these degrees and heights.
        std::vector<CLD> seeds;
        for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
            const auto z = es.eigenvalues()[i];
            seeds.emplace_back(z.real(), z.imag());
        }
        std::vector<bool> used(seeds.size(), false);
        const long double tau = 1e-5L;
        const double target = 1.0 / std::sqrt(double(p));
        for (size_t i = 0; i < seeds.size(); ++i) {
            if (used[i]) continue;
            std::vector<size_t> cluster{i};
            used[i] = true;
            for (size_t j = i + 1; j < seeds.size(); ++j)
                if (!used[j] && std::abs(seeds[j] - seeds[i]) < tau) {
                    used[j] = true;
                    cluster.push_back(j);
                }
            CLD center = 0;
            for (size_t j : cluster) center += seeds[j];
            center /= static_cast<long double>(cluster.size());

            size_t mu = cluster.size();
            CLD root = newton(dc[mu - 1], dc[mu], center);
            if (mu > 1) {
                bool multiple = true;
                for (size_t j = 0; j + 1 < mu; ++j) {
                    const long double s = scale_at(dc[j], std::abs(root));
                    if (std::abs(horner(dc[j], root)) > 1e-13L * std::max<long double>(s, 1e-30L))
                        multiple = false;
                }
                if (!multiple) {
                    // Not a true multiple root: polish each seed on L itself.
                    for (size_t j : cluster) {
                        const CLD u = newton(dc[0], dc[1], seeds[j]);
                        const double dev =
                            std::abs(static_cast<double>(std::abs(u)) - target);
                        if (dev > diag.max_root_deviation) diag.max_root_deviation = dev;
                    }
                    continue;
                }
            }
            const double dev = std::abs(static_cast<double>(std::abs(root)) - target);
            if (dev > diag.max_root_deviation) diag.max_root_deviation = dev;
        }
        if (diag.max_root_deviation > tol) {
            std::ostringstream os;
            os << "root off the critical circle by " << diag.max_root_deviation;
            fail(os.str());
        }
    }
    return diag;
}

RecordDiagnostics check_family(const FamilyData& fam, double tol) {
    RecordDiagnostics worst;
    for (const auto& rec : fam.records) {
        RecordDiagnostics d = check_record(rec, fam.p, fam.n, tol);
        if (d.max_root_deviation > worst.max_root_deviation) worst = d;
    }
    return worst;
}

LaurentTensor moment_tensor(const FamilyData& fam, uint32_t r, uint32_t rt, unsigned threads) {
    if (r + rt < 1) throw std::invalid_argument("moment tensor needs r + rt >= 1");
    uint32_t k = r + rt;
    uint32_t n = fam.n;
    auto fld = fam.field();

    size_t total = 1;
    for (uint32_t i = 0; i < k; ++i) total *= n;

    using Dense = std::vector<CycloScalar>;
    auto map_chunk = [&](size_t lo, size_t hi) {
        Dense acc(total, CycloScalar(fld));
        std::vector<int> d(k);
        for (size_t ri = lo; ri < hi; ++ri) {
            const auto& rec = fam.records[ri];
            CycloScalar eps_inv_pow = CycloScalar::from_int(fld, 1);
            {
                CycloScalar cj = rec.c[n - 1].conj();
                for (uint32_t e = 0; e < rt; ++e) eps_inv_pow = eps_inv_pow * cj;
            }
            for (size_t t = 0; t < total; ++t) {
                size_t rem = t;
                for (uint32_t i = 0; i < k; ++i) {
                    d[i] = int(rem % n);
                    rem /= n;
                }
                CycloScalar prod = eps_inv_pow;
                for (uint32_t i = 0; i < k; ++i) prod = prod * rec.c[size_t(d[i])];
                acc[t] += prod;
            }
        }
        return acc;
    };
    auto merge = [&](Dense a, Dense b) {
        for (size_t t = 0; t < total; ++t) a[t] += b[t];
        return a;
    };
    Dense dense = parallel_map_reduce(fam.records.size(), Dense(total, CycloScalar(fld)),
                                      map_chunk, merge, threads);

    LaurentTensor out(fld, k);
    std::vector<int> d(k);
    for (size_t t = 0; t < total; ++t) {
        size_t rem = t;
        int64_t sum_d = 0;
        for (uint32_t i = 0; i < k; ++i) {
            d[i] = int(rem % n);
            rem /= n;
            sum_d += d[i];
        }
        out.add(d, HalfPowerScalar(dense[t], -(int64_t(rt) * (n - 1) + sum_d)));
    }
    return out;
}

MonodromyReport empirical_m_mu(const FamilyData& fam, uint32_t m_max) {
    MonodromyReport rep;
    uint32_t n = fam.n, p = fam.p;
    rep.p_power_floor = 1;
    while (2 * rep.p_power_floor < n - 1) rep.p_power_floor *= p;

    const auto fld = fam.field();
    const uint64_t pL = fld->order();
    const CycloScalar& g0 = fam.records[0].c[n - 1];

    // epsilon_i / epsilon_0 = c_i / c_0 is a unit of Z[zeta] with every
    // archimedean absolute value 1 (both sides are Gauss-type sums of modulus
    // q^{(n-1)/2}, and (c) = (1-zeta)^{(n-1)phi/2} for each), hence a root of
    // unity +-zeta^k. Scanning the 2 p^L candidates with exact comparisons
    // sidesteps any coefficient growth; the least constant power is the lcm
    // of the phase orders, since record 0 forces the common value to be 1.
    uint64_t m = 1;
    for (const auto& rec : fam.records) {
        bool found_phase = false;
        for (uint64_t k = 0; k < pL && !found_phase; ++k) {
            const CycloScalar cand = g0 * CycloScalar::zeta_power(fld, k);
            for (int sign = 0; sign < 2 && !found_phase; ++sign) {
                if (rec.c[n - 1] == (sign ? -cand : cand)) {
                    uint64_t ord = pL / std::gcd(k, pL);
                    if (sign) ord = std::lcm<uint64_t>(ord, 2);
                    m = std::lcm(m, ord);
                    found_phase = true;
                }
            }
        }
        if (!found_phase) {
            rep.note = "a root-number ratio is not +-zeta^k; no finite order detected";
            return rep;
        }
    }
    if (m > m_max) {
        rep.note = "least constant power m = " + std::to_string(m) + " exceeds the cap " +
                   std::to_string(m_max);
        return rep;
    }
    rep.found = true;
    rep.m = static_cast<uint32_t>(m);

    // mu = epsilon_0^m, again without big powers: c_0^2 and q^{n-1} generate
    // the same ideal, so rho = c_0^2 / q^{n-1} is an exact ring element and a
    // root of unity, and epsilon_0^2 = rho.
    Int128 qn1 = 1;
    for (uint32_t i = 0; i + 1 < n; ++i) qn1 *= p;
    const auto rho = (g0 * g0).divide_exact(qn1);
    if (!rho) throw std::logic_error("c_{n-1}^2 is not divisible by q^{n-1}");
    CycloScalar acc = CycloScalar::from_int(fld, 1);
    for (uint64_t i = 0; i < m / 2; ++i) acc = acc * *rho;
    rep.mu_raw = (m % 2 == 0) ? HalfPowerScalar(acc, 0)
                              : HalfPowerScalar(acc * g0, -int64_t(n - 1));
    rep.mu_signed = (uint64_t(m) * (n - 1)) % 2 == 1 ? -rep.mu_raw : rep.mu_raw;
    rep.floor_divides = (m % rep.p_power_floor == 0);
    return rep;
}

}  // namespace ffm

#include "vdclab/field.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace vdclab {

namespace {

std::uint64_t mulmod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

std::uint64_t powmod_u64(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
    std::uint64_t r = 1 % m;
    a %= m;
    while (e) {
        if (e & 1) r = mulmod_u64(r, a, m);
        a = mulmod_u64(a, a, m);
        e >>= 1;
    }
    return r;
}

}  // namespace

bool is_prime_u64(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n % p == 0) return n == p;
    }
    // deterministic Miller-Rabin for 64-bit inputs with this witness set
    std::uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        std::uint64_t x = powmod_u64(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int i = 1; i < s; ++i) {
            x = mulmod_u64(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

std::uint64_t next_prime(std::uint64_t n) {
    if (n <= 2) return 2;
    if ((n & 1) == 0) ++n;
    while (!is_prime_u64(n)) n += 2;
    return n;
}

// --- univariate helpers over F_q for irreducibility testing ---

namespace {

using UPoly = std::vector<std::uint64_t>;  // coefficients, low to high; no trailing zeros

void trim(UPoly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

UPoly upoly_mod(UPoly a, const UPoly& f, std::uint64_t q) {
    // f monic
    while (a.size() >= f.size()) {
        std::uint64_t lead = a.back();
        std::size_t shift = a.size() - f.size();
        if (lead != 0) {
            for (std::size_t i = 0; i < f.size(); ++i) {
                std::uint64_t sub = mulmod_u64(lead, f[i], q);
                std::uint64_t& slot = a[shift + i];
                slot = (slot + q - sub % q) % q;
            }
        }
        a.pop_back();
    }
    trim(a);
    return a;
}

UPoly upoly_mulmod(const UPoly& a, const UPoly& b, const UPoly& f, std::uint64_t q) {
    if (a.empty() || b.empty()) return {};
    UPoly c(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j)
            c[i + j] = (c[i + j] + mulmod_u64(a[i], b[j], q)) % q;
    return upoly_mod(std::move(c), f, q);
}

UPoly upoly_powmod(UPoly base, std::uint64_t e, const UPoly& f, std::uint64_t q) {
    UPoly r{1};
    while (e) {
        if (e & 1) r = upoly_mulmod(r, base, f, q);
        base = upoly_mulmod(base, base, f, q);
        e >>= 1;
    }
    return r;
}

UPoly upoly_gcd(UPoly a, UPoly b, std::uint64_t q) {
    trim(a);
    trim(b);
    while (!b.empty()) {
        // make b monic for the reduction
        std::uint64_t inv = powmod_u64(b.back(), q - 2, q);
        UPoly bm = b;
        for (auto& c : bm) c = mulmod_u64(c, inv, q);
        a = upoly_mod(std::move(a), bm, q);
        std::swap(a, b);
    }
    return a;
}

// x^(q^reps) mod f by repeated q-th powers
UPoly frobenius_power(const UPoly& f, std::uint64_t q, unsigned reps) {
    UPoly x{0, 1};
    UPoly r = upoly_mod(UPoly{0, 1}, f, q);
    for (unsigned i = 0; i < reps; ++i) r = upoly_powmod(r, q, f, q);
    return r;
}

bool is_irreducible(const UPoly& f, std::uint64_t q, unsigned k) {
    // Rabin test: x^(q^k) == x mod f, and gcd(x^(q^(k/p)) - x, f) constant
    // for every prime p | k.
    UPoly xqk = frobenius_power(f, q, k);
    UPoly x = upoly_mod(UPoly{0, 1}, f, q);
    UPoly diff = xqk;
    diff.resize(std::max(diff.size(), x.size()), 0);
    for (std::size_t i = 0; i < x.size(); ++i) diff[i] = (diff[i] + q - x[i]) % q;
    trim(diff);
    if (!diff.empty()) return false;
    for (unsigned p = 2; p <= k; ++p) {
        if (k % p != 0 || !is_prime_u64(p)) continue;
        UPoly xq = frobenius_power(f, q, k / p);
        UPoly d = xq;
        d.resize(std::max(d.size(), x.size()), 0);
        for (std::size_t i = 0; i < x.size(); ++i) d[i] = (d[i] + q - x[i]) % q;
        trim(d);
        UPoly g = upoly_gcd(f, d, q);
        if (g.size() > 1) return false;
    }
    return true;
}

}  // namespace

std::vector<std::uint32_t> find_irreducible(std::uint64_t q, unsigned k) {
    if (!is_prime_u64(q)) throw ContractError("find_irreducible: q must be prime");
    if (k < 1 || k > kMaxExtDegree) throw ContractError("find_irreducible: k out of range [1,4]");
    if (k == 1) return {0, 1};  // placeholder t; elements are residues mod q
    std::uint64_t total = 1;
    for (unsigned i = 0; i < k; ++i) total *= q;
    for (std::uint64_t v = 0; v < total; ++v) {
        UPoly f(k + 1, 0);
        std::uint64_t rest = v;
        for (unsigned i = 0; i < k; ++i) {
            f[i] = rest % q;
            rest /= q;
        }
        f[k] = 1;
        if (is_irreducible(f, q, k)) {
            std::vector<std::uint32_t> out(k + 1);
            for (unsigned i = 0; i <= k; ++i) out[i] = static_cast<std::uint32_t>(f[i]);
            return out;
        }
    }
    throw std::logic_error("find_irreducible: no irreducible found (unreachable)");
}

FieldCtx::FieldCtx(std::uint64_t q, unsigned k) : FieldCtx(q, k, find_irreducible(q, k)) {}

FieldCtx::FieldCtx(std::uint64_t q, unsigned k, std::vector<std::uint32_t> modulus)
    : q_(q), k_(k), modulus_(std::move(modulus)) {
    if (!is_prime_u64(q_)) throw ContractError("FieldCtx: q must be prime");
    if (k_ < 1 || k_ > kMaxExtDegree) throw ContractError("FieldCtx: k out of range [1,4]");
    if (modulus_.size() != k_ + 1 || modulus_[k_] != 1)
        throw ContractError("FieldCtx: modulus must be monic of degree k");
    if (k_ > 1) {
        UPoly f(modulus_.begin(), modulus_.end());
        if (!is_irreducible(f, q_, k_)) throw ContractError("FieldCtx: modulus is reducible");
    }
    order_ = 1;
    for (unsigned i = 0; i < k_; ++i) order_ *= q_;
}

FieldElem FieldCtx::one() const {
    FieldElem e;
    e.c[0] = 1;
    return e;
}

FieldElem FieldCtx::from_residue(std::int64_t v) const {
    FieldElem e;
    std::int64_t m = static_cast<std::int64_t>(q_);
    e.c[0] = static_cast<std::uint32_t>(((v % m) + m) % m);
    return e;
}

bool FieldCtx::is_zero(const FieldElem& a) const {
    for (unsigned i = 0; i < k_; ++i)
        if (a.c[i] != 0) return false;
    return true;
}

FieldElem FieldCtx::add(const FieldElem& a, const FieldElem& b) const {
    FieldElem r;
    for (unsigned i = 0; i < k_; ++i) {
        std::uint64_t s = static_cast<std::uint64_t>(a.c[i]) + b.c[i];
        r.c[i] = static_cast<std::uint32_t>(s >= q_ ? s - q_ : s);
    }
    return r;
}

FieldElem FieldCtx::sub(const FieldElem& a, const FieldElem& b) const {
    FieldElem r;
    for (unsigned i = 0; i < k_; ++i) {
        std::uint64_t s = static_cast<std::uint64_t>(a.c[i]) + q_ - b.c[i];
        r.c[i] = static_cast<std::uint32_t>(s >= q_ ? s - q_ : s);
    }
    return r;
}

FieldElem FieldCtx::neg(const FieldElem& a) const { return sub(zero(), a); }

FieldElem FieldCtx::mul(const FieldElem& a, const FieldElem& b) const {
    if (k_ == 1) {
        FieldElem r;
        r.c[0] = static_cast<std::uint32_t>(mulmod_u64(a.c[0], b.c[0], q_));
        return r;
    }
    std::array<std::uint64_t, 2 * kMaxExtDegree> buf{};
    for (unsigned i = 0; i < k_; ++i) {
        if (a.c[i] == 0) continue;
        for (unsigned j = 0; j < k_; ++j)
            buf[i + j] = (buf[i + j] + static_cast<std::uint64_t>(a.c[i]) * b.c[j]) % q_;
    }
    // reduce by the monic modulus: t^k = -(mod[k-1] t^{k-1} + ... + mod[0])
    for (int d = 2 * static_cast<int>(k_) - 2; d >= static_cast<int>(k_); --d) {
        std::uint64_t lead = buf[d];
        if (lead == 0) continue;
        buf[d] = 0;
        for (unsigned j = 0; j < k_; ++j) {
            std::uint64_t sub = mulmod_u64(lead, modulus_[j], q_);
            std::uint64_t& slot = buf[d - k_ + j];
            slot = (slot + q_ - sub) % q_;
        }
    }
    FieldElem r;
    for (unsigned i = 0; i < k_; ++i) r.c[i] = static_cast<std::uint32_t>(buf[i]);
    return r;
}

FieldElem FieldCtx::pow(const FieldElem& a, std::uint64_t e) const {
    FieldElem r = one(), b = a;
    while (e) {
        if (e & 1) r = mul(r, b);
        b = mul(b, b);
        e >>= 1;
    }
    return r;
}

FieldElem FieldCtx::inv(const FieldElem& a) const {
    if (is_zero(a)) throw ContractError("FieldCtx::inv of zero");
    return pow(a, order_ - 2);
}

std::uint64_t FieldCtx::index_of(const FieldElem& a) const {
    std::uint64_t idx = 0;
    for (unsigned i = k_; i-- > 0;) idx = idx * q_ + a.c[i];
    return idx;
}

FieldElem FieldCtx::elem_at(std::uint64_t index) const {
    FieldElem e;
    for (unsigned i = 0; i < k_; ++i) {
        e.c[i] = static_cast<std::uint32_t>(index % q_);
        index /= q_;
    }
    return e;
}

std::string FieldCtx::describe() const {
    std::ostringstream os;
    os << "F_" << q_;
    if (k_ > 1) os << "^" << k_;
    return os.str();
}

ProjPoint normalize_projective(const FieldCtx& ctx, std::vector<FieldElem> coords) {
    std::size_t lead = coords.size();
    for (std::size_t i = 0; i < coords.size(); ++i) {
        if (!ctx.is_zero(coords[i])) {
            lead = i;
            break;
        }
    }
    if (lead == coords.size()) throw ContractError("normalize_projective: zero vector");
    FieldElem s = ctx.inv(coords[lead]);
    for (auto& c : coords) c = ctx.mul(c, s);
    return ProjPoint{std::move(coords)};
}

std::uint64_t affine_point_count(const FieldCtx& ctx, unsigned m, std::uint64_t budget) {
    long double total = std::pow(static_cast<long double>(ctx.order()), static_cast<long double>(m));
    if (total > static_cast<long double>(budget))
        throw BudgetError("affine enumeration of " + ctx.describe() + "^" + std::to_string(m) +
                          " exceeds the point budget; raise --budget");
    std::uint64_t n = 1;
    for (unsigned i = 0; i < m; ++i) n *= ctx.order();
    return n;
}

std::uint64_t projective_point_count(const FieldCtx& ctx, unsigned m, std::uint64_t budget) {
    long double total = std::pow(static_cast<long double>(ctx.order()), static_cast<long double>(m));
    long double count = (total - 1) / static_cast<long double>(ctx.order() - 1);
    if (count > static_cast<long double>(budget) || total > 1.8e19L)
        throw BudgetError("projective enumeration of " + ctx.describe() + " P^" +
                          std::to_string(m - 1) + " exceeds the point budget; raise --budget");
    std::uint64_t n = 1;
    for (unsigned i = 0; i < m; ++i) n *= ctx.order();
    return (n - 1) / (ctx.order() - 1);
}

void for_each_affine(const FieldCtx& ctx, unsigned m, std::uint64_t budget,
                     const std::function<void(const FieldElem*)>& fn) {
    affine_point_count(ctx, m, budget);
    std::vector<FieldElem> pt(m, ctx.zero());
    std::vector<std::uint64_t> idx(m, 0);
    const std::uint64_t order = ctx.order();
    while (true) {
        fn(pt.data());
        // odometer, last coordinate fastest
        int i = static_cast<int>(m) - 1;
        for (; i >= 0; --i) {
            if (++idx[i] < order) {
                pt[i] = ctx.elem_at(idx[i]);
                break;
            }
            idx[i] = 0;
            pt[i] = ctx.zero();
        }
        if (i < 0) break;
    }
}

void for_each_projective(const FieldCtx& ctx, unsigned m, std::uint64_t budget,
                         const std::function<void(const FieldElem*)>& fn) {
    projective_point_count(ctx, m, budget);
    std::vector<FieldElem> pt(m, ctx.zero());
    const std::uint64_t order = ctx.order();
    // leading position runs left to right; free coordinates enumerate
    // lexicographically behind it
    for (unsigned lead = 0; lead < m; ++lead) {
        for (unsigned i = 0; i < m; ++i) pt[i] = ctx.zero();
        pt[lead] = ctx.one();
        unsigned free = m - lead - 1;
        if (free == 0) {
            fn(pt.data());
            continue;
        }
        std::vector<std::uint64_t> idx(free, 0);
        while (true) {
            fn(pt.data());
            int i = static_cast<int>(free) - 1;
            for (; i >= 0; --i) {
                if (++idx[i] < order) {
                    pt[lead + 1 + i] = ctx.elem_at(idx[i]);
                    break;
                }
                idx[i] = 0;
                pt[lead + 1 + i] = ctx.zero();
            }
            if (i < 0) break;
        }
    }
}

std::vector<ProjPoint> collect_projective(const FieldCtx& ctx, unsigned m, std::uint64_t budget) {
    std::vector<ProjPoint> out;
    out.reserve(projective_point_count(ctx, m, budget));
    for_each_projective(ctx, m, budget, [&](const FieldElem* pt) {
        out.push_back(ProjPoint{std::vector<FieldElem>(pt, pt + m)});
    });
    return out;
}

std::complex<double> additive_character(const FieldCtx& ctx, std::int64_t a) {
    if (ctx.k() != 1)
        throw ContractError("additive_character: only prime fields are supported");
    double q = static_cast<double>(ctx.q());
    std::int64_t m = static_cast<std::int64_t>(ctx.q());
    double t = static_cast<double>(((a % m) + m) % m);
    double arg = 2.0 * std::numbers::pi * t / q;
    return {std::cos(arg), std::sin(arg)};
}

CharTable::CharTable(std::uint64_t q) : q_(q), roots_(q) {
    for (std::uint64_t t = 0; t < q; ++t) {
        double arg = 2.0 * std::numbers::pi * static_cast<double>(t) / static_cast<double>(q);
        roots_[t] = {std::cos(arg), std::sin(arg)};
    }
}

ReducedPoly::ReducedPoly(const IntPoly& p, std::uint64_t q) : n_vars_(p.n_vars()) {
    BigInt qq = q;
    for (const auto& [e, c] : p.terms()) {
        BigInt r = c % qq;
        if (r < 0) r += qq;
        if (r == 0) continue;
        Term t;
        t.exps.assign(e.begin(), e.end());
        t.coeff = r.convert_to<std::uint32_t>();
        terms_.push_back(std::move(t));
    }
}

int ReducedPoly::degree() const {
    if (terms_.empty()) return kZeroPolyDegree;
    int d = 0;
    for (const auto& t : terms_) {
        int td = 0;
        for (auto e : t.exps) td += static_cast<int>(e);
        d = std::max(d, td);
    }
    return d;
}

std::uint32_t ReducedPoly::eval_prime(const std::uint32_t* point, std::uint64_t q) const {
    std::uint64_t acc = 0;
    for (const auto& t : terms_) {
        std::uint64_t v = t.coeff;
        for (unsigned i = 0; i < n_vars_; ++i) {
            std::uint32_t e = t.exps[i];
            if (e == 0) continue;
            std::uint64_t base = point[i];
            std::uint64_t p = 1;
            while (e) {
                if (e & 1) p = (p * base) % q;
                base = (base * base) % q;
                e >>= 1;
            }
            v = (v * p) % q;
        }
        acc += v;
        if (acc >= (std::uint64_t(1) << 63)) acc %= q;
    }
    return static_cast<std::uint32_t>(acc % q);
}

FieldElem ReducedPoly::eval(const FieldCtx& ctx, const FieldElem* point) const {
    FieldElem acc = ctx.zero();
    for (const auto& t : terms_) {
        FieldElem v = ctx.from_residue(t.coeff);
        for (unsigned i = 0; i < n_vars_; ++i) {
            if (t.exps[i] == 0) continue;
            v = ctx.mul(v, ctx.pow(point[i], t.exps[i]));
        }
        acc = ctx.add(acc, v);
    }
    return acc;
}

IntPoly ReducedPoly::lift() const {
    IntPoly p(n_vars_);
    for (const auto& t : terms_) {
        Exponents e(t.exps.begin(), t.exps.end());
        p.add_term(e, BigInt(t.coeff));
    }
    return p;
}

std::vector<ReducedPoly> reduce_system(const std::vector<IntPoly>& polys, std::uint64_t q) {
    std::vector<ReducedPoly> out;
    out.reserve(polys.size());
    for (const auto& p : polys) out.emplace_back(p, q);
    return out;
}

std::uint32_t eval_reduced(const IntPoly& p, const std::vector<std::int64_t>& point, std::uint64_t q) {
    ReducedPoly rp(p, q);
    std::vector<std::uint32_t> pt(point.size());
    std::int64_t m = static_cast<std::int64_t>(q);
    for (std::size_t i = 0; i < point.size(); ++i)
        pt[i] = static_cast<std::uint32_t>(((point[i] % m) + m) % m);
    return rp.eval_prime(pt.data(), q);
}

}  // namespace vdclab

#include "lfactor/padic.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <numbers>
#include <numeric>
#include <shared_mutex>
#include <sstream>

#include <json.hpp>

namespace lfactor {

namespace {

constexpr i64 kMaxTable = 20'000'000;

i64 checked(__int128 v) {
  if (v > INT64_MAX || v < INT64_MIN) throw PAdicError("integer overflow in p-adic arithmetic");
  return static_cast<i64>(v);
}

}  // namespace

i64 ipow(i64 p, int k) {
  if (k < 0) throw PAdicError("ipow: negative exponent");
  __int128 r = 1;
  for (int i = 0; i < k; ++i) {
    r *= p;
    if (r > INT64_MAX) throw PAdicError("ipow: overflow");
  }
  return static_cast<i64>(r);
}

i64 mod_floor(i64 a, i64 m) {
  i64 r = a % m;
  return r < 0 ? r + m : r;
}

i64 mul_mod(i64 a, i64 b, i64 m) {
  return static_cast<i64>(mod_floor(static_cast<i64>((static_cast<__int128>(a) * b) % m), m));
}

i64 inv_mod(i64 a, i64 m) {
  i64 g = m, x = 0, x1 = 1, a1 = mod_floor(a, m);
  while (a1 != 0) {
    i64 q = g / a1;
    std::tie(g, a1) = std::make_pair(a1, g - q * a1);
    std::tie(x, x1) = std::make_pair(x1, x - q * x1);
  }
  if (g != 1) throw PAdicError("inv_mod: not invertible");
  return mod_floor(x, m);
}

bool is_prime(i64 n) {
  if (n < 2) return false;
  for (i64 d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

int vp(i64 n, i64 p) {
  if (n == 0) throw PAdicError("vp: zero");
  int v = 0;
  while (n % p == 0) {
    n /= p;
    ++v;
  }
  return v;
}

// ---------------------------------------------------------------------------
// PRational
// ---------------------------------------------------------------------------

PRational::PRational(int p, i64 num, int exp) : p_(p), num_(num), exp_(exp) {
  if (p < 2) throw PAdicError("PRational: bad prime");
  if (num_ == 0) {
    exp_ = 0;
    return;
  }
  while (num_ % p_ == 0) {
    num_ /= p_;
    ++exp_;
  }
}

void PRational::check_p(const PRational& o) const {
  if (p_ != o.p_) throw PAdicError("PRational: mismatched primes");
}

int PRational::val() const {
  if (num_ == 0) throw PAdicError("PRational: valuation of zero");
  return exp_;
}

PRational PRational::operator+(const PRational& o) const {
  check_p(o);
  if (is_zero()) return o;
  if (o.is_zero()) return *this;
  const int e = std::min(exp_, o.exp_);
  __int128 a = static_cast<__int128>(num_) * ipow(p_, exp_ - e);
  __int128 b = static_cast<__int128>(o.num_) * ipow(p_, o.exp_ - e);
  return PRational(p_, checked(a + b), e);
}

PRational PRational::operator-() const { return PRational(p_, -num_, exp_); }

PRational PRational::operator-(const PRational& o) const { return *this + (-o); }

PRational PRational::operator*(const PRational& o) const {
  check_p(o);
  return PRational(p_, checked(static_cast<__int128>(num_) * o.num_), exp_ + o.exp_);
}

bool PRational::operator<(const PRational& o) const {
  if (p_ != o.p_) return p_ < o.p_;
  const PRational d = *this - o;
  return d.num_ < 0;
}

PRational PRational::reduce_mod(int k) const {
  if (is_zero() || exp_ >= k) return zero(p_);
  const i64 d = ipow(p_, k - exp_);
  return PRational(p_, mod_floor(num_, d), exp_);
}

bool PRational::congruent(const PRational& c, int k) const { return (*this - c).reduce_mod(k).is_zero(); }

i64 PRational::unit_mod(int k) const {
  if (is_zero()) throw PAdicError("unit_mod: zero");
  return mod_floor(num_, ipow(p_, k));
}

double PRational::to_double() const { return static_cast<double>(num_) * std::pow(static_cast<double>(p_), exp_); }

std::string PRational::to_string() const {
  std::ostringstream os;
  if (exp_ >= 0)
    os << num_ << "*" << p_ << "^" << exp_;
  else
    os << num_ << "/" << p_ << "^" << -exp_;
  return os.str();
}

// ---------------------------------------------------------------------------
// PAdicElt
// ---------------------------------------------------------------------------

PAdicElt::PAdicElt(int p_, int val_, i64 unit_, int prec_) : p(p_), val(val_), prec(prec_) {
  if (!is_prime(p_)) throw PAdicError("PAdicElt: p must be prime");
  if (prec_ < 1) throw PAdicError("PAdicElt: precision must be >= 1");
  const i64 mod = ipow(p_, prec_);
  unit = mod_floor(unit_, mod);
  if (unit % p_ == 0) throw PAdicError("PAdicElt: unit part divisible by p");
}

PAdicElt PAdicElt::from_rational(const PRational& x, int prec) {
  if (x.is_zero()) throw PAdicError("PAdicElt: zero has no unit part");
  return PAdicElt(x.p(), x.val(), x.unit_mod(prec), prec);
}

i64 PAdicElt::unit_mod(int k) const {
  if (k > prec) throw PAdicError("PAdicElt: insufficient precision");
  return unit % ipow(p, k);
}

PAdicElt PAdicElt::operator*(const PAdicElt& o) const {
  if (p != o.p) throw PAdicError("PAdicElt: mismatched primes");
  const int n = std::min(prec, o.prec);
  const i64 mod = ipow(p, n);
  return PAdicElt(p, val + o.val, mul_mod(unit, o.unit, mod), n);
}

PAdicElt PAdicElt::inverse() const { return PAdicElt(p, -val, inv_mod(unit, ipow(p, prec)), prec); }

std::optional<PAdicElt> padic_add(const PAdicElt& x, const PAdicElt& y) {
  if (x.p != y.p) throw PAdicError("padic_add: mismatched primes");
  const PAdicElt& a = x.val <= y.val ? x : y;
  const PAdicElt& b = x.val <= y.val ? y : x;
  const int abs_prec = std::min(a.val + a.prec, b.val + b.prec);
  const int rel = abs_prec - a.val;
  if (rel <= 0) return std::nullopt;
  const i64 mod = ipow(a.p, rel);
  const int shift = b.val - a.val;
  i64 s = a.unit % mod;
  if (shift < rel) s = mod_floor(s + mul_mod(b.unit % mod, ipow(a.p, shift), mod), mod);
  if (s == 0) return std::nullopt;
  const int v = vp(s, a.p);
  if (rel - v < 1) return std::nullopt;
  return PAdicElt(a.p, a.val + v, s / ipow(a.p, v), rel - v);
}

// ---------------------------------------------------------------------------
// psi and measures
// ---------------------------------------------------------------------------

Scalar unit_root(i64 num, i64 den) {
  const i64 r = mod_floor(num, den);
  const double angle = 2.0 * std::numbers::pi * static_cast<double>(r) / static_cast<double>(den);
  return {std::cos(angle), std::sin(angle)};
}

Scalar psi_value(const PAdicElt& x) {
  if (x.val >= 0) return 1.0;
  if (x.prec < -x.val) throw PAdicError("psi_value: insufficient precision");
  const i64 den = ipow(x.p, -x.val);
  return unit_root(x.unit % den, den);
}

Scalar psi_value(const PRational& x) {
  const PRational f = x.reduce_mod(0);
  if (f.is_zero()) return 1.0;
  return unit_root(f.num(), ipow(f.p(), -f.exp()));
}

double shell_volume(int /*m*/, int p) { return 1.0 - 1.0 / p; }

double coset_volume(int p, int k) {
  if (k == 0) return 1.0 - 1.0 / p;
  return std::pow(static_cast<double>(p), -k);
}

// ---------------------------------------------------------------------------
// Unit groups
// ---------------------------------------------------------------------------

std::vector<std::pair<i64, i64>> unit_group_generators(int p, int a) {
  if (!is_prime(p)) throw PAdicError("unit_group: p must be prime");
  if (a < 0) throw PAdicError("unit_group: negative level");
  if (p == 2) {
    if (a <= 1) return {};
    if (a == 2) return {{3, 2}};
    return {{ipow(2, a) - 1, 2}, {5, ipow(2, a - 2)}};
  }
  if (a == 0) return {};
  const i64 p2 = static_cast<i64>(p) * p;
  const i64 full = static_cast<i64>(p) * (p - 1);
  for (i64 g = 2; g < p2; ++g) {
    if (g % p == 0) continue;
    i64 x = 1, ord = 0;
    do {
      x = x * g % p2;
      ++ord;
    } while (x != 1);
    if (ord == full) return {{g % ipow(p, a), ipow(p, a - 1) * (p - 1)}};
  }
  throw PAdicError("unit_group: no primitive root found");
}

UnitGroupTable::UnitGroupTable(int p, int a) : UnitGroupTable(p, a, unit_group_generators(p, a)) {}

UnitGroupTable::UnitGroupTable(int p, int a, std::vector<std::pair<i64, i64>> generators)
    : p_(p), a_(a), generators_(std::move(generators)) {
  modulus_ = ipow(p, a);
  if (modulus_ > kMaxTable) throw PAdicError("unit_group: level too large for a table");
  order_ = a == 0 ? 1 : modulus_ / p * (p - 1);
  for (const auto& [g, o] : generators_) exponent_ = std::lcm(exponent_, o);
  build();
}

void UnitGroupTable::build() {
  const int k = ngens();
  table_.assign(static_cast<std::size_t>(modulus_) * std::max(k, 1), -1);
  i64 prod = 1;
  for (const auto& [g, o] : generators_) prod *= o;
  if (prod != order_) throw PAdicError("unit_group: generator orders do not multiply to phi(p^a)");
  if (k == 0) {
    table_.assign(1, 0);
    return;
  }
  // Walk the exponent box in mixed radix.
  std::vector<i64> e(k, 0);
  for (i64 n = 0; n < order_; ++n) {
    const i64 u = exp(e);
    int* slot = &table_[static_cast<std::size_t>(u) * k];
    if (slot[0] != -1) throw PAdicError("unit_group: generators are not independent");
    for (int i = 0; i < k; ++i) slot[i] = static_cast<int>(e[i]);
    for (int i = k - 1; i >= 0; --i) {
      if (++e[i] < generators_[i].second) break;
      e[i] = 0;
    }
  }
}

std::vector<i64> UnitGroupTable::dlog(i64 u) const {
  const int k = ngens();
  if (k == 0) {
    if (p_ != 2 && a_ > 0) throw PAdicError("dlog: not a unit");
    if (mod_floor(u, p_) == 0) throw PAdicError("dlog: not a unit");
    return {};
  }
  const i64 r = mod_floor(u, modulus_);
  const int* slot = &table_[static_cast<std::size_t>(r) * k];
  if (slot[0] < 0) throw PAdicError("dlog: not a unit");
  return std::vector<i64>(slot, slot + k);
}

i64 UnitGroupTable::exp(const std::vector<i64>& e) const {
  if (static_cast<int>(e.size()) != ngens()) throw PAdicError("exp: wrong exponent vector length");
  i64 r = 1 % std::max<i64>(modulus_, 1);
  if (modulus_ == 1) return 0;
  for (int i = 0; i < ngens(); ++i) {
    i64 base = generators_[i].first % modulus_;
    i64 k = mod_floor(e[i], generators_[i].second);
    while (k > 0) {
      if (k & 1) r = mul_mod(r, base, modulus_);
      base = mul_mod(base, base, modulus_);
      k >>= 1;
    }
  }
  return r;
}

std::vector<i64> UnitGroupTable::units() const {
  std::vector<i64> out;
  out.reserve(static_cast<std::size_t>(order_));
  if (modulus_ == 1) return {0};
  for (i64 r = 1; r < modulus_; ++r)
    if (r % p_ != 0) out.push_back(r);
  return out;
}

bool UnitGroupTable::validate() const {
  try {
    UnitGroupTable fresh(p_, a_, generators_);
    if (fresh.table_ != table_) return false;
    for (const i64 u : units())
      if (exp(dlog(u)) != u % std::max<i64>(modulus_, 1)) return false;
  } catch (const PAdicError&) {
    return false;
  }
  return true;
}

std::string unit_group_cache_dir() {
  const char* env = std::getenv("LFACTOR_CACHE_DIR");
  return env ? std::string(env) : std::string();
}

namespace {

std::shared_ptr<const UnitGroupTable> load_cached(const std::filesystem::path& path, int p, int a) {
  std::ifstream in(path);
  if (!in) return nullptr;
  try {
    nlohmann::json j = nlohmann::json::parse(in);
    if (j.at("p").get<int>() != p || j.at("a").get<int>() != a) return nullptr;
    std::vector<std::pair<i64, i64>> gens;
    for (const auto& g : j.at("generators")) gens.emplace_back(g.at(0).get<i64>(), g.at(1).get<i64>());
    auto table = std::make_shared<UnitGroupTable>(p, a, gens);
    // The stored dlog entries must agree with the rebuilt table.
    for (const auto& [key, vec] : j.at("dlog").items()) {
      const i64 u = std::stoll(key);
      if (table->dlog(u) != vec.get<std::vector<i64>>()) return nullptr;
    }
    if (static_cast<i64>(j.at("dlog").size()) != table->order()) return nullptr;
    return table;
  } catch (const std::exception&) {
    return nullptr;
  }
}

void store_cached(const std::filesystem::path& path, const UnitGroupTable& t) {
  nlohmann::json j;
  j["p"] = t.p();
  j["a"] = t.a();
  j["generators"] = nlohmann::json::array();
  for (const auto& [g, o] : t.generators()) j["generators"].push_back({g, o});
  nlohmann::json dl = nlohmann::json::object();
  for (const i64 u : t.units()) dl[std::to_string(u)] = t.dlog(u);
  j["dlog"] = std::move(dl);
  std::error_code ec;
  std::filesystem::create_directories(path.parent_path(), ec);
  const auto tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) return;
    out << j.dump();
  }
  std::filesystem::rename(tmp, path, ec);
}

}  // namespace

std::shared_ptr<const UnitGroupTable> unit_group(int p, int a) {
  static std::shared_mutex mu;
  static std::map<std::pair<int, int>, std::shared_ptr<const UnitGroupTable>> cache;
  const auto key = std::make_pair(p, a);
  {
    std::shared_lock lock(mu);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  std::shared_ptr<const UnitGroupTable> table;
  // Level 0 is the trivial group; nothing worth storing.
  const std::string dir = a > 0 ? unit_group_cache_dir() : std::string();
  std::filesystem::path path;
  if (!dir.empty()) {
    path = std::filesystem::path(dir) / ("unit_group_p" + std::to_string(p) + "_a" + std::to_string(a) + ".json");
    table = load_cached(path, p, a);
  }
  if (!table) {
    table = std::make_shared<UnitGroupTable>(p, a);
    if (!dir.empty()) store_cached(path, *table);
  }
  std::unique_lock lock(mu);
  auto [it, inserted] = cache.emplace(key, table);
  return it->second;
}

}  // namespace lfactor

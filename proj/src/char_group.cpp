#include "thml/char_group.hpp"

#include <cstring>
#include <fstream>
#include <numbers>
#include <string>
#include <system_error>

namespace thml {

namespace {

constexpr char kCacheMagic[4] = {'T', 'H', 'M', 'L'};
constexpr u32 kCacheVersion = 1;

void require_odd_prime(u64 p) {
  if (p < 3 || p % 2 == 0 || !is_prime(p)) {
    throw std::invalid_argument("modulus " + std::to_string(p) + " is not an odd prime");
  }
}

template <class T>
void write_le(std::ostream& out, T value) {
  unsigned char bytes[sizeof(T)];
  for (std::size_t i = 0; i < sizeof(T); ++i) bytes[i] = static_cast<unsigned char>(value >> (8 * i));
  out.write(reinterpret_cast<const char*>(bytes), sizeof(T));
}

template <class T>
T read_le(std::istream& in) {
  unsigned char bytes[sizeof(T)];
  in.read(reinterpret_cast<char*>(bytes), sizeof(T));
  if (!in) throw std::runtime_error("dlog cache truncated");
  T value = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) value |= static_cast<T>(bytes[i]) << (8 * i);
  return value;
}

}  // namespace

const char* to_string(Parity parity) { return parity == Parity::even ? "even" : "odd"; }

Parity parse_parity(const std::string& text) {
  if (text == "even") return Parity::even;
  if (text == "odd") return Parity::odd;
  throw std::invalid_argument("parity must be 'even' or 'odd', got '" + text + "'");
}

u64 find_primitive_root(u64 p) {
  require_odd_prime(p);
  const auto factors = distinct_prime_factors(p - 1);
  for (u64 g = 2; g < p; ++g) {
    bool generator = true;
    for (u64 q : factors) {
      if (pow_mod(g, (p - 1) / q, p) == 1) {
        generator = false;
        break;
      }
    }
    if (generator) return g;
  }
  throw std::logic_error("no primitive root found");  // unreachable for prime p
}

std::size_t CharacterGroup::required_bytes(u64 p) {
  return static_cast<std::size_t>(p) * (2 * sizeof(u32) + sizeof(std::complex<double>));
}

void CharacterGroup::check_budget(std::size_t memory_budget) const {
  const std::size_t need = required_bytes(p_);
  if (need > memory_budget) {
    throw BudgetExceeded("character tables for p=" + std::to_string(p_) + " need " + std::to_string(need) +
                             " bytes, budget is " + std::to_string(memory_budget),
                         need);
  }
}

CharacterGroup::CharacterGroup(u64 p, std::size_t memory_budget) : p_(p) {
  require_odd_prime(p);
  if (p > (u64{1} << 32)) throw std::invalid_argument("modulus exceeds 32-bit table entries");
  check_budget(memory_budget);
  g_ = find_primitive_root(p);
  dlog_.assign(p, 0);
  powers_.assign(p - 1, 0);
  u64 v = 1;
  for (u64 k = 0; k < p - 1; ++k) {
    powers_[k] = static_cast<u32>(v);
    dlog_[v] = static_cast<u32>(k);
    v = mul_mod(v, g_, p);
  }
  build_roots();
}

void CharacterGroup::build_roots() {
  const u64 n = p_ - 1;
  roots_.resize(n);
  // Directly from the exact fraction k/n so every entry carries O(eps) error.
  for (u64 k = 0; k < n; ++k) {
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
    roots_[k] = {std::cos(angle), std::sin(angle)};
  }
}

std::complex<double> CharacterGroup::value(CharacterIndex index, u64 n) const {
  const u64 r = n % p_;
  if (r == 0) return {0.0, 0.0};
  const u64 k = mul_mod(index.j % (p_ - 1), dlog_[r], p_ - 1);
  return roots_[k];
}

std::vector<CharacterIndex> CharacterGroup::characters(Parity parity) const {
  std::vector<CharacterIndex> out;
  out.reserve((p_ - 1) / 2);
  for (u64 j = (parity == Parity::even ? 0 : 1); j < p_ - 1; j += 2) out.push_back({j});
  return out;
}

void CharacterGroup::save_dlog_cache(const std::filesystem::path& path) const {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write dlog cache " + tmp.string());
    out.write(kCacheMagic, 4);
    write_le<u32>(out, kCacheVersion);
    write_le<u64>(out, p_);
    for (u64 n = 1; n < p_; ++n) write_le<u32>(out, dlog_[n]);
    if (!out) throw std::runtime_error("short write to dlog cache " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

CharacterGroup CharacterGroup::load_dlog_cache(const std::filesystem::path& path, u64 p, std::size_t memory_budget) {
  require_odd_prime(p);
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open dlog cache " + path.string());
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kCacheMagic, 4) != 0) throw std::runtime_error("bad dlog cache magic");
  if (read_le<u32>(in) != kCacheVersion) throw std::runtime_error("unsupported dlog cache version");
  if (read_le<u64>(in) != p) throw std::runtime_error("dlog cache is keyed to a different modulus");

  CharacterGroup group;
  group.p_ = p;
  group.check_budget(memory_budget);
  group.g_ = find_primitive_root(p);
  group.dlog_.assign(p, 0);
  group.powers_.assign(p - 1, 0);
  std::vector<bool> seen(p - 1, false);
  for (u64 n = 1; n < p; ++n) {
    const u32 k = read_le<u32>(in);
    if (k >= p - 1 || seen[k]) throw std::runtime_error("dlog cache is not a bijection");
    seen[k] = true;
    group.dlog_[n] = k;
    group.powers_[k] = static_cast<u32>(n);
  }
  if (group.dlog_[1] != 0 || group.dlog_[group.g_] != 1) throw std::runtime_error("dlog cache inconsistent with root");
  // Spot check the homomorphism property on a few elements.
  for (u64 n = 2; n < p && n < 64; ++n) {
    const u64 next = mul_mod(n, group.g_, p);
    if ((group.dlog_[n] + 1) % (p - 1) != group.dlog_[next]) throw std::runtime_error("dlog cache corrupt");
  }
  group.build_roots();
  return group;
}

OrthogonalitySum orthogonality_sum(const CharacterGroup& group, u64 m, u64 n, Parity parity) {
  CompensatedSum<double> re;
  CompensatedSum<double> im;
  for (CharacterIndex index : group.characters(parity)) {
    const auto term = group.value(index, m) * std::conj(group.value(index, n));
    re.add(term.real());
    im.add(term.imag());
  }
  return {re.value(), im.value()};
}

}  // namespace thml

#ifndef STACKY_TEST_SUPPORT_HPP
#define STACKY_TEST_SUPPORT_HPP

#include <random>

#include "stacky/cli.hpp"

namespace stacky::test {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  long uniform(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(gen_); }

  Element element(const NumberField& K, long bound)
  {
    Element a = K.zero();
    for (auto& c : a.c) c = uniform(-bound, bound);
    return a;
  }

  Element nonzero(const NumberField& K, long bound)
  {
    while (true) {
      Element a = element(K, bound);
      if (!K.is_zero(a)) return a;
    }
  }

  Element rational_element(const NumberField& K, long bound)
  {
    Element a = K.zero();
    for (auto& c : a.c) c = Rational(uniform(-bound, bound), uniform(1, bound));
    for (auto& c : a.c) c.canonicalize();
    return a;
  }

  template <class T>
  const T& pick(const std::vector<T>& v)
  {
    return v[static_cast<std::size_t>(uniform(0, static_cast<long>(v.size()) - 1))];
  }

  std::mt19937_64& engine() { return gen_; }

 private:
  std::mt19937_64 gen_;
};

inline Element el(const NumberField& K, const std::string& text) { return K.parse_element(text); }

inline bool is_squarefree(long n)
{
  n = n < 0 ? -n : n;
  for (long d = 2; d * d <= n; ++d)
    if (n % (d * d) == 0) return false;
  return n != 0;
}

/* Valid odd coprime prime pairs drawn from small candidates. */
inline std::vector<Element> odd_prime_elements(const NumberField& K, long bound)
{
  std::vector<Element> out;
  Rng rng(7);
  for (int tries = 0; tries < 4000 && out.size() < 60; ++tries) {
    Element a = rng.nonzero(K, bound);
    if (K.is_unit(a)) continue;
    try {
      auto v = K.is_prime_element(a);
      if (v.prime && v.place->prime != 2) out.push_back(a);
    } catch (const Error&) {
    }
  }
  return out;
}

/* x^2 mod ell^k, as a membership table. */
struct SquareTable {
  long modulus = 1;
  std::vector<char> is_square;

  SquareTable(long ell, int k)
  {
    for (int i = 0; i < k; ++i) modulus *= ell;
    is_square.assign(static_cast<std::size_t>(modulus), 0);
    for (long z = 0; z < modulus; ++z) is_square[static_cast<std::size_t>(z * z % modulus)] = 1;
  }
  bool operator()(long v) const { return is_square[static_cast<std::size_t>(((v % modulus) + modulus) % modulus)]; }
};

/* Primitive solutions of z^2 = a x^2 + b y^2 modulo ell^k over Z, ell odd.
 * A primitive triple can be scaled so that x = 1, or x in (ell) and y = 1;
 * with x, y both in (ell) the right side lies in (ell^2) and z could not be
 * a unit. */
inline bool brute_force_conic_mod(long a, long b, long ell, const SquareTable& sq)
{
  long M = sq.modulus;
  long am = ((a % M) + M) % M, bm = ((b % M) + M) % M;
  for (long y = 0; y < M; ++y)
    if (sq(am + bm * (y * y % M))) return true;
  for (long x = 0; x < M; x += ell)
    if (sq(am * (x * x % M) + bm)) return true;
  return false;
}

inline bool brute_force_conic_mod(long a, long b, long ell, int k)
{
  return brute_force_conic_mod(a, b, ell, SquareTable(ell, k));
}

inline int ell_valuation(long n, long ell)
{
  int v = 0;
  while (n % ell == 0) {
    n /= ell;
    ++v;
  }
  return v;
}

/* One random single-field edit of a JSON document: bump a decimal string,
 * alter another string, flip a boolean, drop an object key, or drop or
 * duplicate an array element. */
inline std::string mutate_json(const std::string& bytes, Rng& rng, std::string* what = nullptr)
{
  Json doc = Json::parse(bytes);
  Json flat = doc.flatten();
  std::vector<std::string> leaves;
  for (auto& [k, v] : flat.items()) leaves.push_back(k);
  const std::string& path = rng.pick(leaves);
  Json::json_pointer ptr(path);
  int kind = static_cast<int>(rng.uniform(0, 9));
  std::string note;
  if (kind <= 5) {
    Json& leaf = doc[ptr];
    if (leaf.is_boolean()) {
      leaf = !leaf.get<bool>();
      note = "flip";
    } else {
      std::string s = leaf.get<std::string>();
      Integer z;
      if (parse_decimal(s, z)) {
        z += kind % 2 == 0 ? 1 : -1;
        if (z.get_str() == s) z += 2;
        leaf = z.get_str();
        note = "bump";
      } else {
        leaf = s + "_";
        note = "retag";
      }
    }
  } else if (kind <= 7) {
    Json::json_pointer parent = ptr.parent_pointer();
    Json& container = doc[parent];
    if (container.is_object()) {
      container.erase(ptr.back());
      note = "drop key";
    } else {
      std::size_t idx = std::stoul(ptr.back());
      container.erase(container.begin() + static_cast<std::ptrdiff_t>(idx));
      note = "drop element";
    }
  } else {
    Json::json_pointer parent = ptr.parent_pointer();
    Json& container = doc[parent];
    if (container.is_array()) {
      container.push_back(container.back());
      note = "duplicate element";
    } else {
      container["extra"] = "0";
      note = "add key";
    }
  }
  if (what) *what = note + " at " + path;
  return doc.dump(2) + "\n";
}

}  // namespace stacky::test

#endif

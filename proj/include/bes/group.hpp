#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace bes {

using Elem = std::int64_t; // dense index in [0, order)

// Finite group given as a cyclic order, a power Z_q^m, or an explicit Cayley
// table. Table specs are validated on construction: Latin square, two-sided
// identity, associativity (inverses then follow).
class GroupSpec {
public:
  enum class Kind { Cyclic, Power, Table };

  static GroupSpec cyclic(std::int64_t n) {
    if (n < 2) throw std::invalid_argument("cyclic: n must be >= 2");
    GroupSpec g;
    g.kind_ = Kind::Cyclic;
    g.n_ = n;
    g.order_ = n;
    return g;
  }

  static GroupSpec power(std::int64_t q, std::int64_t m) {
    if (q < 2) throw std::invalid_argument("power: q must be >= 2");
    if (m < 1) throw std::invalid_argument("power: m must be >= 1");
    GroupSpec g;
    g.kind_ = Kind::Power;
    g.q_ = q;
    g.m_ = m;
    g.order_ = 1;
    for (std::int64_t i = 0; i < m; ++i) {
      if (g.order_ > (std::int64_t{1} << 40) / q)
        throw std::invalid_argument("power: order too large");
      g.order_ *= q;
    }
    return g;
  }

  static GroupSpec table(std::vector<std::vector<Elem>> cayley) {
    GroupSpec g;
    g.kind_ = Kind::Table;
    g.table_ = std::move(cayley);
    g.order_ = static_cast<std::int64_t>(g.table_.size());
    g.validate_table();
    return g;
  }

  Kind kind() const { return kind_; }
  std::int64_t order() const { return order_; }
  std::int64_t cyclic_n() const { return n_; }
  std::int64_t power_q() const { return q_; }
  std::int64_t power_m() const { return m_; }
  const std::vector<std::vector<Elem>>& cayley() const { return table_; }
  Elem identity() const { return identity_; }

  Elem op(Elem a, Elem b) const {
    check(a);
    check(b);
    switch (kind_) {
      case Kind::Cyclic:
        return (a + b) % n_;
      case Kind::Power: {
        Elem r = 0, mul = 1;
        for (std::int64_t i = 0; i < m_; ++i) {
          const Elem da = (a / mul) % q_;
          const Elem db = (b / mul) % q_;
          r += ((da + db) % q_) * mul;
          mul *= q_;
        }
        return r;
      }
      case Kind::Table:
        return table_[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
    }
    throw std::logic_error("unreachable");
  }

  Elem inverse(Elem a) const {
    check(a);
    switch (kind_) {
      case Kind::Cyclic:
        return a == 0 ? 0 : n_ - a;
      case Kind::Power: {
        Elem r = 0, mul = 1;
        for (std::int64_t i = 0; i < m_; ++i) {
          const Elem d = (a / mul) % q_;
          r += ((q_ - d) % q_) * mul;
          mul *= q_;
        }
        return r;
      }
      case Kind::Table:
        for (Elem b = 0; b < order_; ++b)
          if (op(a, b) == identity_) return b;
        throw std::logic_error("table group without inverse");
    }
    throw std::logic_error("unreachable");
  }

  // Z_q^m coordinate helpers.
  std::vector<std::int64_t> to_coords(Elem a) const {
    require_power();
    check(a);
    std::vector<std::int64_t> c(static_cast<std::size_t>(m_));
    for (std::int64_t i = 0; i < m_; ++i) {
      c[static_cast<std::size_t>(i)] = a % q_;
      a /= q_;
    }
    return c;
  }

  Elem from_coords(const std::vector<std::int64_t>& c) const {
    require_power();
    if (static_cast<std::int64_t>(c.size()) != m_)
      throw std::invalid_argument("from_coords: wrong length");
    Elem a = 0, mul = 1;
    for (std::int64_t i = 0; i < m_; ++i) {
      const std::int64_t d = c[static_cast<std::size_t>(i)];
      if (d < 0 || d >= q_) throw std::invalid_argument("from_coords: bad residue");
      a += d * mul;
      mul *= q_;
    }
    return a;
  }

  Elem scale(std::int64_t lambda, Elem a) const {
    require_power();
    check(a);
    Elem r = 0, mul = 1;
    lambda %= q_;
    if (lambda < 0) lambda += q_;
    for (std::int64_t i = 0; i < m_; ++i) {
      const Elem d = (a / mul) % q_;
      r += ((d * lambda) % q_) * mul;
      mul *= q_;
    }
    return r;
  }

  bool is_subgroup(const std::vector<Elem>& elems) const {
    if (elems.empty()) return false;
    std::vector<char> in(static_cast<std::size_t>(order_), 0);
    for (Elem e : elems) {
      if (e < 0 || e >= order_) return false;
      in[static_cast<std::size_t>(e)] = 1;
    }
    if (!in[static_cast<std::size_t>(identity_)]) return false;
    for (Elem a : elems) {
      if (!in[static_cast<std::size_t>(inverse(a))]) return false;
      for (Elem b : elems)
        if (!in[static_cast<std::size_t>(op(a, b))]) return false;
    }
    return true;
  }

  std::string to_string() const {
    switch (kind_) {
      case Kind::Cyclic:
        return "zn:" + std::to_string(n_);
      case Kind::Power:
        return "zqm:" + std::to_string(q_) + ":" + std::to_string(m_);
      case Kind::Table:
        return "table:" + std::to_string(order_);
    }
    return "?";
  }

private:
  GroupSpec() = default;

  void check(Elem a) const {
    if (a < 0 || a >= order_)
      throw std::invalid_argument("element index out of range");
  }

  void require_power() const {
    if (kind_ != Kind::Power)
      throw std::invalid_argument("operation requires a power spec");
  }

  void validate_table() {
    const std::size_t n = table_.size();
    if (n < 1) throw std::invalid_argument("table: empty");
    if (n > 512) throw std::invalid_argument("table: order beyond validation budget");
    for (const auto& row : table_) {
      if (row.size() != n) throw std::invalid_argument("table: not square");
      for (Elem e : row)
        if (e < 0 || e >= static_cast<Elem>(n))
          throw std::invalid_argument("table: entry out of range");
    }
    // Latin square
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<char> row_seen(n, 0), col_seen(n, 0);
      for (std::size_t j = 0; j < n; ++j) {
        if (row_seen[static_cast<std::size_t>(table_[i][j])]++)
          throw std::invalid_argument("table: repeated entry in row");
        if (col_seen[static_cast<std::size_t>(table_[j][i])]++)
          throw std::invalid_argument("table: repeated entry in column");
      }
    }
    // two-sided identity
    identity_ = -1;
    for (std::size_t e = 0; e < n; ++e) {
      bool ok = true;
      for (std::size_t a = 0; a < n && ok; ++a)
        ok = table_[e][a] == static_cast<Elem>(a) &&
             table_[a][e] == static_cast<Elem>(a);
      if (ok) {
        identity_ = static_cast<Elem>(e);
        break;
      }
    }
    if (identity_ < 0) throw std::invalid_argument("table: no identity");
    // associativity
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        for (std::size_t c = 0; c < n; ++c) {
          const Elem ab = table_[a][b];
          const Elem bc = table_[b][c];
          if (table_[static_cast<std::size_t>(ab)][c] !=
              table_[a][static_cast<std::size_t>(bc)])
            throw std::invalid_argument("table: not associative");
        }
  }

  Kind kind_ = Kind::Cyclic;
  std::int64_t n_ = 0;
  std::int64_t q_ = 0;
  std::int64_t m_ = 0;
  std::int64_t order_ = 0;
  Elem identity_ = 0;
  std::vector<std::vector<Elem>> table_;
};

inline Elem group_op(const GroupSpec& spec, Elem a, Elem b) {
  return spec.op(a, b);
}

} // namespace bes

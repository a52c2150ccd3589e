#include "polyswitch/lp.hpp"

#include <stdexcept>

namespace polyswitch::lp {

std::optional<std::vector<Rational>> feasible_point(const Matrix& a_le, const std::vector<Rational>& b_le,
                                                    const Matrix& a_eq, const std::vector<Rational>& b_eq) {
  if (a_le.size() != b_le.size() || a_eq.size() != b_eq.size()) {
    throw std::invalid_argument("constraint matrix and right-hand side differ in length");
  }
  std::size_t vars = 0;
  if (!a_le.empty()) vars = a_le.front().size();
  else if (!a_eq.empty()) vars = a_eq.front().size();
  for (const auto& row : a_le) {
    if (row.size() != vars) throw std::invalid_argument("ragged constraint matrix");
  }
  for (const auto& row : a_eq) {
    if (row.size() != vars) throw std::invalid_argument("ragged constraint matrix");
  }

  const std::size_t rows = a_le.size() + a_eq.size();
  if (rows == 0) return std::vector<Rational>(vars);

  // Column layout: originals, one slack per inequality, then artificials.
  std::size_t artificials = 0;
  for (const auto& b : b_le) artificials += b.sign() < 0 ? 1 : 0;
  artificials += a_eq.size();
  const std::size_t slack0 = vars;
  const std::size_t art0 = vars + a_le.size();
  const std::size_t cols = art0 + artificials;
  const std::size_t rhs = cols;

  Matrix tab(rows, std::vector<Rational>(cols + 1));
  std::vector<std::size_t> basis(rows);
  std::size_t next_art = art0;
  for (std::size_t i = 0; i < a_le.size(); ++i) {
    const bool flip = b_le[i].sign() < 0;
    for (std::size_t j = 0; j < vars; ++j) tab[i][j] = flip ? -a_le[i][j] : a_le[i][j];
    tab[i][slack0 + i] = flip ? Rational(-1) : Rational(1);
    tab[i][rhs] = flip ? -b_le[i] : b_le[i];
    if (flip) {
      tab[i][next_art] = 1;
      basis[i] = next_art++;
    } else {
      basis[i] = slack0 + i;
    }
  }
  for (std::size_t k = 0; k < a_eq.size(); ++k) {
    const std::size_t i = a_le.size() + k;
    const bool flip = b_eq[k].sign() < 0;
    for (std::size_t j = 0; j < vars; ++j) tab[i][j] = flip ? -a_eq[k][j] : a_eq[k][j];
    tab[i][rhs] = flip ? -b_eq[k] : b_eq[k];
    tab[i][next_art] = 1;
    basis[i] = next_art++;
  }

  auto cost = [&](std::size_t col) { return col >= art0 ? Rational(1) : Rational(0); };

  while (true) {
    std::optional<std::size_t> entering;
    for (std::size_t j = 0; j < cols && !entering; ++j) {
      Rational reduced = cost(j);
      for (std::size_t i = 0; i < rows; ++i) {
        if (basis[i] >= art0 && !tab[i][j].is_zero()) reduced -= tab[i][j];
      }
      if (reduced.sign() < 0) entering = j;
    }
    if (!entering) break;
    const std::size_t col = *entering;

    std::optional<std::size_t> leaving;
    Rational best_ratio;
    for (std::size_t i = 0; i < rows; ++i) {
      if (tab[i][col].sign() <= 0) continue;
      Rational ratio = tab[i][rhs] / tab[i][col];
      if (!leaving || ratio < best_ratio || (ratio == best_ratio && basis[i] < basis[*leaving])) {
        leaving = i;
        best_ratio = ratio;
      }
    }
    // Phase 1 is bounded below by zero, so an improving column always has a pivot row.
    if (!leaving) throw std::logic_error("unbounded phase-1 direction");
    const std::size_t r = *leaving;

    const Rational pivot = tab[r][col];
    for (auto& v : tab[r]) v /= pivot;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || tab[i][col].is_zero()) continue;
      const Rational factor = tab[i][col];
      for (std::size_t j = 0; j <= cols; ++j) {
        if (!tab[r][j].is_zero()) tab[i][j] -= factor * tab[r][j];
      }
    }
    basis[r] = col;
  }

  for (std::size_t i = 0; i < rows; ++i) {
    if (basis[i] >= art0 && !tab[i][rhs].is_zero()) return std::nullopt;
  }
  std::vector<Rational> point(vars);
  for (std::size_t i = 0; i < rows; ++i) {
    if (basis[i] < vars) point[basis[i]] = tab[i][rhs];
  }
  return point;
}

}  // namespace polyswitch::lp

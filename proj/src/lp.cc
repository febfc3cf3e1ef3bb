#include "pce/lp.h"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "pce/errors.h"

namespace pce {

LinearProgram::LinearProgram(int num_variables)
    : objective_(static_cast<size_t>(num_variables), Rational(0)),
      bounds_(static_cast<size_t>(num_variables)) {
  if (num_variables < 0) throw std::invalid_argument("negative variable count");
}

void LinearProgram::SetObjective(RationalVector objective) {
  if (objective.size() != objective_.size()) {
    throw std::invalid_argument("objective width " + std::to_string(objective.size()) +
                                " != " + std::to_string(objective_.size()));
  }
  objective_ = std::move(objective);
}

void LinearProgram::AddConstraint(RationalVector coefficients, Relation relation, Rational rhs) {
  if (coefficients.size() != objective_.size()) {
    throw std::invalid_argument("constraint width " + std::to_string(coefficients.size()) +
                                " != " + std::to_string(objective_.size()));
  }
  constraints_.push_back({std::move(coefficients), relation, std::move(rhs)});
}

void LinearProgram::SetBounds(int variable, std::optional<Rational> lower,
                              std::optional<Rational> upper) {
  if (variable < 0 || variable >= num_variables()) {
    throw std::out_of_range("variable index out of range");
  }
  bounds_[variable] = {std::move(lower), std::move(upper)};
}

void LinearProgram::PermuteConstraints(std::span<const int> order) {
  if (order.size() != constraints_.size()) throw std::invalid_argument("bad permutation");
  std::vector<LinearConstraint> permuted;
  permuted.reserve(order.size());
  for (int k : order) permuted.push_back(constraints_.at(k));
  constraints_ = std::move(permuted);
}

namespace {

// maximize c.y  s.t. rows (relation) rhs, y >= 0.
struct StandardForm {
  int num_columns = 0;
  RationalVector objective;
  std::vector<LinearConstraint> rows;
};

enum class Status { kOptimal, kInfeasible, kUnbounded };

class Simplex {
 public:
  explicit Simplex(const StandardForm& form) : form_(form) {}

  Status Solve(RationalVector& solution) {
    Build();
    if (!artificial_.empty()) {
      RationalVector phase_one(width_, Rational(0));
      for (int col : artificial_) phase_one[col] = -1;
      if (!Optimize(phase_one)) return Status::kUnbounded;  // cannot happen
      if (Objective() < 0) return Status::kInfeasible;
      DriveOutArtificials();
      for (int col : artificial_) banned_[col] = true;
    }
    RationalVector phase_two(width_, Rational(0));
    for (int j = 0; j < form_.num_columns; ++j) phase_two[j] = form_.objective[j];
    if (!Optimize(phase_two)) return Status::kUnbounded;
    solution.assign(form_.num_columns, Rational(0));
    for (size_t r = 0; r < rows_.size(); ++r) {
      if (basis_[r] < form_.num_columns) solution[basis_[r]] = rows_[r][width_];
    }
    return Status::kOptimal;
  }

 private:
  // Relation after negating rows with a negative right-hand side.
  static Relation EffectiveRelation(const LinearConstraint& row) {
    if (row.rhs >= 0 || row.relation == Relation::kEqual) return row.relation;
    return row.relation == Relation::kLessEqual ? Relation::kGreaterEqual : Relation::kLessEqual;
  }

  void Build() {
    const int n = form_.num_columns;
    int extra = 0;
    for (const auto& row : form_.rows) {
      extra += EffectiveRelation(row) == Relation::kGreaterEqual ? 2 : 1;
    }
    width_ = n + extra;
    banned_.assign(width_, false);
    rows_.clear();
    basis_.clear();
    int next = n;
    for (const auto& row : form_.rows) {
      RationalVector t(width_ + 1, Rational(0));
      const bool flip = row.rhs < 0;
      const Relation relation = EffectiveRelation(row);
      for (int j = 0; j < n; ++j) t[j] = flip ? Rational(-row.coefficients[j]) : row.coefficients[j];
      t[width_] = flip ? Rational(-row.rhs) : row.rhs;
      switch (relation) {
        case Relation::kLessEqual:
          t[next] = 1;
          basis_.push_back(next);
          next += 1;
          break;
        case Relation::kGreaterEqual:
          t[next] = -1;
          t[next + 1] = 1;
          artificial_.push_back(next + 1);
          basis_.push_back(next + 1);
          next += 2;
          break;
        case Relation::kEqual:
          t[next] = 1;
          artificial_.push_back(next);
          basis_.push_back(next);
          next += 1;
          break;
      }
      rows_.push_back(std::move(t));
    }
  }

  Rational Objective() const { return -reduced_[width_]; }

  void Pivot(size_t pivot_row, int column) {
    RationalVector& p = rows_[pivot_row];
    const Rational inverse = 1 / p[column];
    std::vector<int> nonzero;
    for (int j = 0; j <= width_; ++j) {
      if (sgn(p[j]) != 0) {
        p[j] *= inverse;
        nonzero.push_back(j);
      }
    }
    auto eliminate = [&](RationalVector& row) {
      if (sgn(row[column]) == 0) return;
      const Rational factor = row[column];
      for (int j : nonzero) row[j] -= factor * p[j];
    };
    for (size_t r = 0; r < rows_.size(); ++r) {
      if (r != pivot_row) eliminate(rows_[r]);
    }
    eliminate(reduced_);
    basis_[pivot_row] = column;
  }

  // Returns false when unbounded.
  bool Optimize(const RationalVector& cost) {
    reduced_.assign(width_ + 1, Rational(0));
    for (int j = 0; j < width_; ++j) reduced_[j] = cost[j];
    for (size_t r = 0; r < rows_.size(); ++r) {
      const Rational& cb = cost[basis_[r]];
      if (sgn(cb) == 0) continue;
      for (int j = 0; j <= width_; ++j) {
        if (sgn(rows_[r][j]) != 0) reduced_[j] -= cb * rows_[r][j];
      }
    }
    while (true) {
      int entering = -1;
      for (int j = 0; j < width_; ++j) {
        if (!banned_[j] && sgn(reduced_[j]) > 0) {
          entering = j;
          break;
        }
      }
      if (entering < 0) return true;
      std::optional<size_t> leaving;
      Rational best_ratio;
      for (size_t r = 0; r < rows_.size(); ++r) {
        if (sgn(rows_[r][entering]) <= 0) continue;
        Rational ratio = rows_[r][width_] / rows_[r][entering];
        if (!leaving || ratio < best_ratio ||
            (ratio == best_ratio && basis_[r] < basis_[*leaving])) {
          leaving = r;
          best_ratio = ratio;
        }
      }
      if (!leaving) return false;
      Pivot(*leaving, entering);
    }
  }

  void DriveOutArtificials() {
    std::vector<bool> is_artificial(width_, false);
    for (int col : artificial_) is_artificial[col] = true;
    for (size_t r = 0; r < rows_.size();) {
      if (!is_artificial[basis_[r]]) {
        ++r;
        continue;
      }
      int column = -1;
      for (int j = 0; j < width_; ++j) {
        if (!is_artificial[j] && sgn(rows_[r][j]) != 0) {
          column = j;
          break;
        }
      }
      if (column >= 0) {
        Pivot(r, column);
        ++r;
      } else {
        // Redundant equality.
        rows_.erase(rows_.begin() + static_cast<long>(r));
        basis_.erase(basis_.begin() + static_cast<long>(r));
      }
    }
  }

  const StandardForm& form_;
  int width_ = 0;
  std::vector<RationalVector> rows_;
  std::vector<int> basis_;
  std::vector<int> artificial_;
  std::vector<bool> banned_;
  RationalVector reduced_;
};

// x_k = offset_k + sum_(col, sign) sign * y_col
struct VariableMap {
  Rational offset;
  std::vector<std::pair<int, int>> columns;
};

struct Transformed {
  StandardForm form;
  std::vector<VariableMap> maps;
  Rational objective_offset;
};

Transformed ToStandardForm(const LinearProgram& lp) {
  Transformed out;
  const int n = lp.num_variables();
  out.maps.resize(n);
  int columns = 0;
  std::vector<std::pair<int, Rational>> upper_rows;  // column y <= value
  for (int k = 0; k < n; ++k) {
    const auto& b = lp.bounds()[k];
    auto& map = out.maps[k];
    if (b.lower) {
      if (b.upper && *b.upper < *b.lower) {
        // Empty box; encode as an infeasible row below.
        upper_rows.push_back({columns, Rational(-1)});
      }
      map.offset = *b.lower;
      map.columns.push_back({columns, 1});
      if (b.upper && *b.upper >= *b.lower) upper_rows.push_back({columns, *b.upper - *b.lower});
      columns += 1;
    } else if (b.upper) {
      map.offset = *b.upper;
      map.columns.push_back({columns, -1});
      columns += 1;
    } else {
      map.offset = 0;
      map.columns.push_back({columns, 1});
      map.columns.push_back({columns + 1, -1});
      columns += 2;
    }
  }
  out.form.num_columns = columns;
  out.form.objective.assign(columns, Rational(0));
  out.objective_offset = 0;
  for (int k = 0; k < n; ++k) {
    const Rational& c = lp.objective()[k];
    if (sgn(c) == 0) continue;
    out.objective_offset += c * out.maps[k].offset;
    for (auto [col, sign] : out.maps[k].columns) out.form.objective[col] += sign * c;
  }
  for (const auto& con : lp.constraints()) {
    LinearConstraint row{RationalVector(columns, Rational(0)), con.relation, con.rhs};
    for (int k = 0; k < n; ++k) {
      const Rational& a = con.coefficients[k];
      if (sgn(a) == 0) continue;
      row.rhs -= a * out.maps[k].offset;
      for (auto [col, sign] : out.maps[k].columns) row.coefficients[col] += sign * a;
    }
    out.form.rows.push_back(std::move(row));
  }
  for (auto& [col, value] : upper_rows) {
    LinearConstraint row{RationalVector(columns, Rational(0)), Relation::kLessEqual, value};
    row.coefficients[col] = 1;
    out.form.rows.push_back(std::move(row));
  }
  return out;
}

RationalVector Recover(const Transformed& t, const RationalVector& y) {
  RationalVector x;
  x.reserve(t.maps.size());
  for (const auto& map : t.maps) {
    Rational value = map.offset;
    for (auto [col, sign] : map.columns) value += sign * y[col];
    x.push_back(value);
  }
  return x;
}

}  // namespace

LpResult SolveExact(const LinearProgram& lp) {
  Transformed t = ToStandardForm(lp);
  Simplex simplex(t.form);
  RationalVector y;
  switch (simplex.Solve(y)) {
    case Status::kInfeasible:
      return LpInfeasible{};
    case Status::kUnbounded:
      return LpUnbounded{};
    case Status::kOptimal:
      break;
  }
  RationalVector x = Recover(t, y);
  Rational value = 0;
  for (int k = 0; k < lp.num_variables(); ++k) value += lp.objective()[k] * x[k];
  return LpOptimal{value, std::move(x)};
}

std::optional<MaxMinResult> MaxMinCoordinate(const LinearProgram& region,
                                             std::span<const int> coordinates) {
  const int n = region.num_variables();
  std::vector<bool> listed(n, false);
  for (int c : coordinates) {
    if (c < 0 || c >= n) throw std::out_of_range("coordinate index out of range");
    listed[c] = true;
  }
  bool nonnegative = true;
  for (int c : coordinates) {
    const auto& b = region.bounds()[c];
    if (!b.lower || *b.lower != 0) nonnegative = false;
  }
  const int delta = n;
  LinearProgram lp(n + 1);
  RationalVector objective(n + 1, Rational(0));
  objective[delta] = 1;
  lp.SetObjective(objective);
  for (int k = 0; k < n; ++k) {
    const auto& b = region.bounds()[k];
    lp.SetBounds(k, b.lower, b.upper);
  }
  if (nonnegative) {
    // Substitute x_c = y_c + delta with y_c >= 0: no extra rows, and
    // delta >= 0 is implied by feasibility of x_c >= 0.
    for (const auto& con : region.constraints()) {
      RationalVector row = con.coefficients;
      Rational shift = 0;
      for (int c : coordinates) shift += con.coefficients[c];
      row.push_back(shift);
      lp.AddConstraint(std::move(row), con.relation, con.rhs);
    }
    for (int c : coordinates) {
      const auto& b = region.bounds()[c];
      if (b.upper) {
        RationalVector row(n + 1, Rational(0));
        row[c] = 1;
        row[delta] = 1;
        lp.SetBounds(c, Rational(0), std::nullopt);
        lp.AddConstraint(std::move(row), Relation::kLessEqual, *b.upper);
      }
    }
    lp.SetBounds(delta, Rational(0), std::nullopt);
  } else {
    for (const auto& con : region.constraints()) {
      RationalVector row = con.coefficients;
      row.push_back(0);
      lp.AddConstraint(std::move(row), con.relation, con.rhs);
    }
    for (int c : coordinates) {
      RationalVector row(n + 1, Rational(0));
      row[c] = 1;
      row[delta] = -1;
      lp.AddConstraint(std::move(row), Relation::kGreaterEqual, Rational(0));
    }
    lp.SetBounds(delta, std::nullopt, std::nullopt);
  }
  LpResult result = SolveExact(lp);
  if (std::holds_alternative<LpInfeasible>(result)) return std::nullopt;
  if (std::holds_alternative<LpUnbounded>(result)) {
    throw PreconditionError("max-min coordinate is unbounded: region is not a polytope");
  }
  auto& optimal = std::get<LpOptimal>(result);
  MaxMinResult out;
  out.delta = optimal.point[delta];
  out.point.assign(optimal.point.begin(), optimal.point.begin() + n);
  if (nonnegative) {
    for (int c : coordinates) out.point[c] += out.delta;
  }
  return out;
}

}  // namespace pce

#include "expmoment/cost_table.hpp"

#include <cmath>
#include <stdexcept>

#include "expmoment/io.hpp"

namespace expmoment {

FiniteCostTable::FiniteCostTable(std::size_t n_symbols, std::size_t n_strategies,
                                 std::vector<double> row_major)
    : n_symbols_(n_symbols), n_strategies_(n_strategies), data_(std::move(row_major)) {
  if (n_symbols_ == 0 || n_strategies_ == 0)
    throw std::invalid_argument("cost table: empty dimension");
  if (data_.size() != n_symbols_ * n_strategies_)
    throw std::invalid_argument("cost table: size mismatch");
  for (double v : data_)
    if (!std::isfinite(v))
      throw std::invalid_argument("cost table: entries must be finite");
}

FiniteCostTable FiniteCostTable::from_rows(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) throw std::invalid_argument("cost table: no rows");
  const std::size_t cols = rows[0].size();
  std::vector<double> flat;
  flat.reserve(rows.size() * cols);
  for (const auto& r : rows) {
    if (r.size() != cols)
      throw std::invalid_argument("cost table: ragged rows");
    flat.insert(flat.end(), r.begin(), r.end());
  }
  return FiniteCostTable(rows.size(), cols, std::move(flat));
}

std::vector<double> FiniteCostTable::column(std::size_t s) const {
  if (s >= n_strategies_)
    throw std::invalid_argument("cost table: strategy index out of range");
  std::vector<double> col(n_symbols_);
  for (std::size_t x = 0; x < n_symbols_; ++x) col[x] = (*this)(x, s);
  return col;
}

FiniteCostTable hamming_table(std::size_t n) {
  if (n == 0) throw std::invalid_argument("hamming_table: empty alphabet");
  std::vector<double> flat(n * n, 1.0);
  for (std::size_t i = 0; i < n; ++i) flat[i * n + i] = 0.0;
  return FiniteCostTable(n, n, std::move(flat));
}

FiniteCostTable parse_cost_table_csv(const std::string& text) {
  const auto cells = parse_csv(text);
  if (cells.empty()) throw std::invalid_argument("cost table: empty input");
  std::vector<std::vector<double>> rows;
  for (std::size_t r = 0; r < cells.size(); ++r) {
    std::vector<double> row;
    row.reserve(cells[r].size());
    bool numeric = true;
    for (const auto& cell : cells[r]) {
      try {
        row.push_back(parse_double(cell));
      } catch (const std::invalid_argument&) {
        numeric = false;
        break;
      }
    }
    if (!numeric) {
      if (r == 0) continue;  // header row
      throw std::invalid_argument("cost table: non-numeric cell in row " +
                                  std::to_string(r + 1));
    }
    rows.push_back(std::move(row));
  }
  return FiniteCostTable::from_rows(rows);
}

FiniteCostTable load_cost_table(const std::string& path_or_dash) {
  return parse_cost_table_csv(read_text_input(path_or_dash));
}

std::string format_cost_table_csv(const FiniteCostTable& table) {
  std::string out;
  for (std::size_t x = 0; x < table.n_symbols(); ++x) {
    for (std::size_t s = 0; s < table.n_strategies(); ++s) {
      if (s) out += ",";
      out += format_double(table(x, s));
    }
    out += "\n";
  }
  return out;
}

}  // namespace expmoment

#pragma once

#include <span>
#include <string>
#include <vector>

namespace expmoment {

// Cost matrix over symbol x strategy pairs, row-major by symbol. Also does
// duty as a distortion matrix (rows = source letters, columns = reproduction
// letters). All entries must be finite.
class FiniteCostTable {
 public:
  FiniteCostTable(std::size_t n_symbols, std::size_t n_strategies,
                  std::vector<double> row_major);
  static FiniteCostTable from_rows(const std::vector<std::vector<double>>& rows);

  std::size_t n_symbols() const { return n_symbols_; }
  std::size_t n_strategies() const { return n_strategies_; }

  double operator()(std::size_t x, std::size_t s) const {
    return data_[x * n_strategies_ + s];
  }
  std::span<const double> row(std::size_t x) const {
    return std::span<const double>(data_.data() + x * n_strategies_, n_strategies_);
  }
  std::vector<double> column(std::size_t s) const;

 private:
  std::size_t n_symbols_;
  std::size_t n_strategies_;
  std::vector<double> data_;
};

// Hamming distortion on an n-letter alphabet: 0 on the diagonal, 1 off it.
FiniteCostTable hamming_table(std::size_t n);

// CSV where each row is a symbol. A first row whose cells are not all
// numeric is treated as a header and skipped.
FiniteCostTable parse_cost_table_csv(const std::string& text);
FiniteCostTable load_cost_table(const std::string& path_or_dash);
std::string format_cost_table_csv(const FiniteCostTable& table);

}  // namespace expmoment

// Dense matrices over GF(p).
//
// Storage is an Eigen row-major integer matrix holding canonical residues;
// every arithmetic entry point reduces modulo the field, so a Mat never holds a
// value outside [0, p). Elimination-based routines (rank, solve_right) pivot on
// the first nonzero entry of each column, scanning columns left to right, so
// results are reproducible bit for bit.
#ifndef SUMNET_MATRIX_HPP
#define SUMNET_MATRIX_HPP

#include <Eigen/Core>

#include <cstddef>
#include <initializer_list>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "sumnet/galois.hpp"

namespace sumnet {

class ShapeMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

using Index = Eigen::Index;
using Storage = Eigen::Matrix<Residue, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

class Mat {
 public:
  /// Zero matrix.
  Mat(PrimeField field, Index rows, Index cols);

  static Mat zero(PrimeField field, Index rows, Index cols) { return Mat(field, rows, cols); }
  static Mat identity(PrimeField field, Index n);
  /// Entries are reduced mod p, so negative literals are accepted.
  static Mat from_rows(PrimeField field, std::initializer_list<std::initializer_list<std::int64_t>> rows);
  static Mat from_entries(PrimeField field, Index rows, Index cols, std::span<const std::int64_t> row_major);
  /// Takes ownership of raw storage after reducing every entry.
  static Mat from_storage(PrimeField field, Storage data);

  Index rows() const noexcept { return data_.rows(); }
  Index cols() const noexcept { return data_.cols(); }
  const PrimeField& field() const noexcept { return field_; }
  const Storage& storage() const noexcept { return data_; }

  Residue operator()(Index i, Index j) const { return data_(i, j); }
  Felt at(Index i, Index j) const { return Felt(field_, data_(i, j)); }
  void set(Index i, Index j, std::int64_t v) { data_(i, j) = field_.reduce(v); }

  bool is_zero() const { return (data_.array() == 0).all(); }
  std::vector<Residue> entries() const;

  Mat block(Index row, Index col, Index nrows, Index ncols) const;
  /// Overwrites the region starting at (row, col) with src.
  void set_block(Index row, Index col, const Mat& src);
  /// Adds src into the region starting at (row, col).
  void add_block(Index row, Index col, const Mat& src);

  friend bool operator==(const Mat& a, const Mat& b) {
    return a.field_ == b.field_ && a.data_.rows() == b.data_.rows() && a.data_.cols() == b.data_.cols() &&
           a.data_ == b.data_;
  }

 private:
  Mat(PrimeField field, Storage data) : field_(field), data_(std::move(data)) {}

  PrimeField field_;
  Storage data_;
};

Mat matmul(const Mat& a, const Mat& b);
Mat operator*(const Mat& a, const Mat& b);
Mat operator+(const Mat& a, const Mat& b);
Mat operator-(const Mat& a, const Mat& b);
Mat scale(const Mat& a, std::int64_t c);
Mat transpose(const Mat& a);

Mat hstack(const Mat& a, const Mat& b);
Mat vstack(const Mat& a, const Mat& b);
/// Horizontal concatenation of a nonempty list with equal row counts.
Mat hstack(std::span<const Mat> parts);
Mat vstack(std::span<const Mat> parts);

std::size_t rank(const Mat& a);

/// Finds D with D * a == b. Free variables of an underdetermined system are set
/// to zero. Returns nullopt when b's rows are not in the row space of a.
std::optional<Mat> solve_right(const Mat& a, const Mat& b);

std::ostream& operator<<(std::ostream& os, const Mat& m);

}  // namespace sumnet

#endif  // SUMNET_MATRIX_HPP

#include "sumnet/matrix.hpp"

#include <ostream>
#include <string>

namespace sumnet {

namespace {

void require_field(const Mat& a, const Mat& b, const char* op) {
  if (!(a.field() == b.field())) {
    throw FieldMismatch(std::string(op) + ": GF(" + std::to_string(a.field().modulus()) + ") vs GF(" +
                        std::to_string(b.field().modulus()) + ")");
  }
}

[[noreturn]] void shape_error(const char* op, const Mat& a, const Mat& b) {
  throw ShapeMismatch(std::string(op) + ": " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                      " vs " + std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
}

// Gaussian elimination over GF(p) on the first `pivot_cols` columns of m.
// With `reduced`, pivot rows are normalized and cleared above as well (RREF).
// Returns the pivot column of each of the leading rows.
std::vector<Index> eliminate(Storage& m, const PrimeField& f, Index pivot_cols, bool reduced) {
  const Residue p = f.characteristic();
  const Index nrows = m.rows();
  const Index ncols = m.cols();
  std::vector<Index> pivots;
  Index row = 0;
  for (Index col = 0; col < pivot_cols && row < nrows; ++col) {
    Index pr = row;
    while (pr < nrows && m(pr, col) == 0) ++pr;
    if (pr == nrows) continue;
    if (pr != row) m.row(pr).swap(m.row(row));

    const Residue inv = f.inv(m(row, col));
    if (reduced || inv != 1) {
      Residue* prow = m.row(row).data();
      for (Index j = col; j < ncols; ++j) prow[j] = (prow[j] * inv) % p;
    }
    const Residue* prow = m.row(row).data();
    const Index begin = reduced ? 0 : row + 1;
    for (Index r = begin; r < nrows; ++r) {
      if (r == row) continue;
      Residue* target = m.row(r).data();
      const Residue factor = target[col];
      if (factor == 0) continue;
      const Residue neg = p - factor;
      for (Index j = col; j < ncols; ++j) {
        if (prow[j] != 0) target[j] = (target[j] + neg * prow[j]) % p;
      }
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

}  // namespace

Mat::Mat(PrimeField field, Index rows, Index cols) : field_(field), data_(Storage::Zero(rows, cols)) {
  if (rows < 0 || cols < 0) throw ShapeMismatch("negative matrix dimension");
}

Mat Mat::identity(PrimeField field, Index n) {
  return Mat(field, Storage(Storage::Identity(n, n)));
}

Mat Mat::from_rows(PrimeField field, std::initializer_list<std::initializer_list<std::int64_t>> rows) {
  const Index nrows = static_cast<Index>(rows.size());
  const Index ncols = nrows == 0 ? 0 : static_cast<Index>(rows.begin()->size());
  Mat out(field, nrows, ncols);
  Index i = 0;
  for (const auto& row : rows) {
    if (static_cast<Index>(row.size()) != ncols) throw ShapeMismatch("ragged row list");
    Index j = 0;
    for (std::int64_t v : row) out.set(i, j++, v);
    ++i;
  }
  return out;
}

Mat Mat::from_entries(PrimeField field, Index rows, Index cols, std::span<const std::int64_t> row_major) {
  if (static_cast<Index>(row_major.size()) != rows * cols) {
    throw ShapeMismatch("expected " + std::to_string(rows * cols) + " entries, got " +
                        std::to_string(row_major.size()));
  }
  Mat out(field, rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) out.set(i, j, row_major[static_cast<std::size_t>(i * cols + j)]);
  return out;
}

Mat Mat::from_storage(PrimeField field, Storage data) {
  data = data.unaryExpr([&field](Residue v) { return field.reduce(v); });
  return Mat(field, std::move(data));
}

std::vector<Residue> Mat::entries() const {
  return std::vector<Residue>(data_.data(), data_.data() + data_.size());
}

Mat Mat::block(Index row, Index col, Index nrows, Index ncols) const {
  if (row < 0 || col < 0 || row + nrows > rows() || col + ncols > cols()) {
    throw ShapeMismatch("block out of range");
  }
  return Mat(field_, Storage(data_.block(row, col, nrows, ncols)));
}

void Mat::set_block(Index row, Index col, const Mat& src) {
  require_field(*this, src, "set_block");
  if (row < 0 || col < 0 || row + src.rows() > rows() || col + src.cols() > cols()) {
    shape_error("set_block", *this, src);
  }
  data_.block(row, col, src.rows(), src.cols()) = src.data_;
}

void Mat::add_block(Index row, Index col, const Mat& src) {
  require_field(*this, src, "add_block");
  if (row < 0 || col < 0 || row + src.rows() > rows() || col + src.cols() > cols()) {
    shape_error("add_block", *this, src);
  }
  const Residue p = field_.characteristic();
  auto dst = data_.block(row, col, src.rows(), src.cols());
  dst = (dst + src.data_).unaryExpr([p](Residue v) { return v >= p ? v - p : v; });
}

Mat matmul(const Mat& a, const Mat& b) {
  require_field(a, b, "matmul");
  if (a.cols() != b.rows()) shape_error("matmul", a, b);
  const PrimeField& f = a.field();
  const Residue p = f.characteristic();
  // Eigen's integer product is exact as long as the widest dot product stays
  // below 2^62; otherwise fall back to reducing after every term.
  const auto bound = static_cast<unsigned __int128>(p - 1) * static_cast<unsigned __int128>(p - 1) *
                     static_cast<unsigned __int128>(a.cols() + 1);
  if (bound < (static_cast<unsigned __int128>(1) << 62)) {
    Storage prod = a.storage() * b.storage();
    return Mat::from_storage(f, std::move(prod));
  }
  Storage prod = Storage::Zero(a.rows(), b.cols());
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index k = 0; k < a.cols(); ++k) {
      const Residue aik = a(i, k);
      if (aik == 0) continue;
      for (Index j = 0; j < b.cols(); ++j) prod(i, j) = (prod(i, j) + aik * b(k, j)) % p;
    }
  }
  return Mat::from_storage(f, std::move(prod));
}

Mat operator*(const Mat& a, const Mat& b) { return matmul(a, b); }

Mat operator+(const Mat& a, const Mat& b) {
  require_field(a, b, "add");
  if (a.rows() != b.rows() || a.cols() != b.cols()) shape_error("add", a, b);
  return Mat::from_storage(a.field(), a.storage() + b.storage());
}

Mat operator-(const Mat& a, const Mat& b) {
  require_field(a, b, "sub");
  if (a.rows() != b.rows() || a.cols() != b.cols()) shape_error("sub", a, b);
  return Mat::from_storage(a.field(), a.storage() - b.storage());
}

Mat scale(const Mat& a, std::int64_t c) {
  const Residue k = a.field().reduce(c);
  const Residue p = a.field().characteristic();
  return Mat::from_storage(a.field(), a.storage().unaryExpr([k, p](Residue v) { return (v * k) % p; }));
}

Mat transpose(const Mat& a) { return Mat::from_storage(a.field(), a.storage().transpose()); }

Mat hstack(const Mat& a, const Mat& b) {
  const Mat parts[] = {a, b};
  return hstack(parts);
}

Mat vstack(const Mat& a, const Mat& b) {
  const Mat parts[] = {a, b};
  return vstack(parts);
}

Mat hstack(std::span<const Mat> parts) {
  if (parts.empty()) throw ShapeMismatch("hstack of nothing");
  const Mat& first = parts.front();
  Index cols = 0;
  for (const Mat& m : parts) {
    require_field(first, m, "hstack");
    if (m.rows() != first.rows()) shape_error("hstack", first, m);
    cols += m.cols();
  }
  Mat out(first.field(), first.rows(), cols);
  Index at = 0;
  for (const Mat& m : parts) {
    out.set_block(0, at, m);
    at += m.cols();
  }
  return out;
}

Mat vstack(std::span<const Mat> parts) {
  if (parts.empty()) throw ShapeMismatch("vstack of nothing");
  const Mat& first = parts.front();
  Index rows = 0;
  for (const Mat& m : parts) {
    require_field(first, m, "vstack");
    if (m.cols() != first.cols()) shape_error("vstack", first, m);
    rows += m.rows();
  }
  Mat out(first.field(), rows, first.cols());
  Index at = 0;
  for (const Mat& m : parts) {
    out.set_block(at, 0, m);
    at += m.rows();
  }
  return out;
}

std::size_t rank(const Mat& a) {
  Storage work = a.storage();
  return eliminate(work, a.field(), work.cols(), /*reduced=*/false).size();
}

std::optional<Mat> solve_right(const Mat& a, const Mat& b) {
  require_field(a, b, "solve_right");
  if (a.cols() != b.cols()) shape_error("solve_right", a, b);
  const PrimeField& f = a.field();
  const Index n = a.rows();  // unknowns per right-hand side
  const Index r = b.rows();  // right-hand sides

  // D * a = b  <=>  a^T * D^T = b^T.
  Storage aug(a.cols(), n + r);
  aug.leftCols(n) = a.storage().transpose();
  aug.rightCols(r) = b.storage().transpose();
  const std::vector<Index> pivots = eliminate(aug, f, n, /*reduced=*/true);

  const auto rank = static_cast<Index>(pivots.size());
  for (Index row = rank; row < aug.rows(); ++row) {
    if (!(aug.row(row).tail(r).array() == 0).all()) return std::nullopt;
  }
  Storage dt = Storage::Zero(n, r);
  for (Index row = 0; row < rank; ++row) dt.row(pivots[static_cast<std::size_t>(row)]) = aug.row(row).tail(r);
  return Mat::from_storage(f, dt.transpose());
}

std::ostream& operator<<(std::ostream& os, const Mat& m) {
  os << '[';
  for (Index i = 0; i < m.rows(); ++i) {
    os << (i == 0 ? "[" : " [");
    for (Index j = 0; j < m.cols(); ++j) os << (j == 0 ? "" : " ") << m(i, j);
    os << ']';
  }
  return os << "] mod " << m.field().modulus();
}

}  // namespace sumnet

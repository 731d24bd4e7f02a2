// SPDX-License-Identifier: Apache-2.0
#include "fitnn/mnist.hpp"

#include <fstream>

namespace fitnn {

namespace {

std::uint32_t read_be32(std::istream& is, const std::string& path) {
  unsigned char b[4];
  is.read(reinterpret_cast<char*>(b), 4);
  if (!is)
    throw IdxError(IdxError::Code::truncated, "idx: truncated header in " + path);
  return (std::uint32_t{b[0]} << 24) | (std::uint32_t{b[1]} << 16) |
         (std::uint32_t{b[2]} << 8) | std::uint32_t{b[3]};
}

}  // namespace

ImageDataset ImageDataset::take(Eigen::Index n) const {
  if (n <= 0 || n >= images.rows()) return *this;
  ImageDataset out;
  out.images = images.topRows(n);
  out.image_rows = image_rows;
  out.image_cols = image_cols;
  return out;
}

ImageDataset load_idx(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IdxError(IdxError::Code::io, "idx: cannot open " + path);

  const std::uint32_t magic = read_be32(is, path);
  if (magic != 0x00000803u)
    throw IdxError(IdxError::Code::bad_magic,
                   "idx: bad magic in " + path + " (not an IDX3 ubyte file)");
  const std::uint32_t count = read_be32(is, path);
  const std::uint32_t rows = read_be32(is, path);
  const std::uint32_t cols = read_be32(is, path);
  if (count == 0 || rows == 0 || cols == 0 || rows > 4096 || cols > 4096)
    throw IdxError(IdxError::Code::bad_dims,
                   "idx: implausible dimensions in " + path);

  const std::size_t pixels = std::size_t{count} * rows * cols;
  std::vector<unsigned char> buf(pixels);
  is.read(reinterpret_cast<char*>(buf.data()),
          static_cast<std::streamsize>(pixels));
  if (static_cast<std::size_t>(is.gcount()) != pixels)
    throw IdxError(IdxError::Code::truncated,
                   "idx: file shorter than header claims: " + path);

  ImageDataset ds;
  ds.image_rows = static_cast<int>(rows);
  ds.image_cols = static_cast<int>(cols);
  ds.images.resize(count, static_cast<Eigen::Index>(rows) * cols);
  for (std::uint32_t i = 0; i < count; ++i)
    for (std::uint32_t p = 0; p < rows * cols; ++p)
      ds.images(i, p) =
          static_cast<double>(buf[std::size_t{i} * rows * cols + p]) / 255.0;
  return ds;
}

std::vector<std::vector<Eigen::Index>> batch_indices(Eigen::Index n,
                                                     Eigen::Index batch_size,
                                                     Rng* shuffle_rng) {
  if (n <= 0) throw std::invalid_argument("batch_indices: empty dataset");
  if (batch_size < 1) throw std::invalid_argument("batch_indices: batch_size < 1");
  std::vector<Eigen::Index> order(n);
  for (Eigen::Index i = 0; i < n; ++i) order[i] = i;
  if (shuffle_rng) {
    // Fisher-Yates
    for (Eigen::Index i = n - 1; i > 0; --i) {
      const auto j = static_cast<Eigen::Index>(
          shuffle_rng->uniform_index(static_cast<std::uint64_t>(i) + 1));
      std::swap(order[i], order[j]);
    }
  }
  std::vector<std::vector<Eigen::Index>> out;
  out.reserve(static_cast<std::size_t>((n + batch_size - 1) / batch_size));
  for (Eigen::Index start = 0; start < n; start += batch_size) {
    const Eigen::Index stop = std::min(n, start + batch_size);
    out.emplace_back(order.begin() + start, order.begin() + stop);
  }
  return out;
}

std::vector<Eigen::MatrixXd> batches(const ImageDataset& ds,
                                     Eigen::Index batch_size,
                                     std::uint64_t shuffle_seed) {
  Rng rng(shuffle_seed);
  std::vector<Eigen::MatrixXd> out;
  for (const auto& idx : batch_indices(ds.size(), batch_size, &rng))
    out.push_back(gather_rows(ds.images, idx));
  return out;
}

Eigen::MatrixXd gather_rows(const Eigen::MatrixXd& m,
                            const std::vector<Eigen::Index>& rows) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()), m.cols());
  for (std::size_t i = 0; i < rows.size(); ++i)
    out.row(static_cast<Eigen::Index>(i)) = m.row(rows[i]);
  return out;
}

}  // namespace fitnn

#ifndef CONFORMAP_IO_HPP
#define CONFORMAP_IO_HPP

#include "conformap/types.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace conformap {

// Rectangular numeric CSV with optional header row. Numeric columns become
// coordinates; label_column (name or 0-based index) is extracted as integer
// classes via a stable first-appearance string-to-id mapping. Malformed
// input raises DataError with the row/column location.
Dataset load_csv(const std::string& path, const std::optional<std::string>& label_column);

// MNIST-style idx files: big-endian magic, dims, then raw bytes. Images are
// flattened to one row per item; labels_path (idx1) is optional.
Dataset load_idx(const std::string& path, const std::optional<std::string>& labels_path);

// Uniform seeded subsample without replacement; row order of the kept
// points follows the original dataset.
Dataset subsample(const Dataset& data, long max_points, std::uint64_t seed);

// embedding.csv: header id,y_1..y_n, coordinates with 17 significant digits
// so a parse round-trips bit-exactly.
void write_embedding_csv(const std::string& path, const Dataset& data, const Embedding& emb);

// Parses a file written by write_embedding_csv back into a coordinate matrix.
Matrix read_embedding_csv(const std::string& path);

// Scatter plot of the first two components, one <circle> per point, colored
// by label when present.
void write_embedding_svg(const std::string& path, const Dataset& data, const Embedding& emb);

} // namespace conformap

#endif

#include "conformap/io.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>
#include <unordered_map>

namespace conformap {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::stringstream stream(line);
    while (std::getline(stream, cell, ',')) {
        // trim surrounding whitespace
        const auto first = cell.find_first_not_of(" \t\r");
        const auto last = cell.find_last_not_of(" \t\r");
        cells.push_back(first == std::string::npos ? std::string()
                                                   : cell.substr(first, last - first + 1));
    }
    if (!line.empty() && line.back() == ',') {
        cells.emplace_back();
    }
    return cells;
}

bool parse_double(const std::string& text, double& out) {
    if (text.empty()) {
        return false;
    }
    char* end = nullptr;
    out = std::strtod(text.c_str(), &end);
    return end == text.c_str() + text.size();
}

} // namespace

Dataset load_csv(const std::string& path, const std::optional<std::string>& label_column) {
    std::ifstream file(path);
    if (!file) {
        throw DataError("cannot open " + path);
    }

    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(file, line)) {
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        rows.push_back(split_csv_line(line));
    }
    if (rows.empty()) {
        throw DataError(path + ": empty file");
    }

    const std::size_t n_cols = rows.front().size();
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != n_cols) {
            throw DataError(path + ": ragged row " + std::to_string(r + 1) + " has " +
                            std::to_string(rows[r].size()) + " cells, expected " +
                            std::to_string(n_cols));
        }
    }

    // Header heuristic: some column is non-numeric in row 1 but numeric in
    // row 2. A consistently non-numeric column is data (a string label).
    bool has_header = false;
    if (rows.size() >= 2) {
        for (std::size_t c = 0; c < n_cols; ++c) {
            double v;
            if (!parse_double(rows[0][c], v) && parse_double(rows[1][c], v)) {
                has_header = true;
                break;
            }
        }
    }

    std::vector<std::string> header;
    if (has_header) {
        header = rows.front();
        rows.erase(rows.begin());
    }
    if (rows.empty()) {
        throw DataError(path + ": no data rows");
    }

    // Resolve the label column by name or 0-based index.
    std::ptrdiff_t label_idx = -1;
    if (label_column.has_value()) {
        const std::string& want = *label_column;
        const auto it = std::find(header.begin(), header.end(), want);
        if (it != header.end()) {
            label_idx = it - header.begin();
        } else {
            int idx = -1;
            const auto [ptr, ec] =
                std::from_chars(want.data(), want.data() + want.size(), idx);
            if (ec == std::errc() && ptr == want.data() + want.size() && idx >= 0 &&
                static_cast<std::size_t>(idx) < n_cols) {
                label_idx = idx;
            } else {
                throw DataError(path + ": label column \"" + want + "\" not found");
            }
        }
    }

    const std::size_t n_features = n_cols - (label_idx >= 0 ? 1 : 0);
    if (n_features == 0) {
        throw DataError(path + ": no feature columns left");
    }

    Dataset data;
    data.points.resize(static_cast<Eigen::Index>(rows.size()),
                       static_cast<Eigen::Index>(n_features));
    std::unordered_map<std::string, int> label_ids;
    if (label_idx >= 0) {
        data.labels.reserve(rows.size());
    }

    const std::size_t header_offset = has_header ? 1 : 0;
    for (std::size_t r = 0; r < rows.size(); ++r) {
        std::size_t f = 0;
        for (std::size_t c = 0; c < n_cols; ++c) {
            if (static_cast<std::ptrdiff_t>(c) == label_idx) {
                const auto inserted =
                    label_ids.try_emplace(rows[r][c], static_cast<int>(label_ids.size()));
                data.labels.push_back(inserted.first->second);
                continue;
            }
            double v;
            if (!parse_double(rows[r][c], v)) {
                throw DataError(path + ": non-numeric cell at row " +
                                std::to_string(r + 1 + header_offset) + ", column " +
                                std::to_string(c + 1) + " (\"" + rows[r][c] + "\")");
            }
            data.points(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(f++)) = v;
        }
    }
    data.validate();
    return data;
}

namespace {

std::uint32_t read_be32(std::ifstream& file, const std::string& path) {
    std::array<unsigned char, 4> buf;
    if (!file.read(reinterpret_cast<char*>(buf.data()), 4)) {
        throw DataError(path + ": truncated idx header");
    }
    return (std::uint32_t(buf[0]) << 24) | (std::uint32_t(buf[1]) << 16) |
           (std::uint32_t(buf[2]) << 8) | std::uint32_t(buf[3]);
}

} // namespace

Dataset load_idx(const std::string& path, const std::optional<std::string>& labels_path) {
    std::ifstream file(path, std::ios::binary);
    if (!file) {
        throw DataError("cannot open " + path);
    }
    const std::uint32_t magic = read_be32(file, path);
    if ((magic >> 8) != 0x08 || (magic & 0xff) < 1) {
        throw DataError(path + ": not an unsigned-byte idx file");
    }
    const int n_dims = static_cast<int>(magic & 0xff);
    if (n_dims < 2) {
        throw DataError(path + ": idx data file needs at least 2 dimensions");
    }
    std::vector<std::uint32_t> dims(n_dims);
    for (auto& d : dims) {
        d = read_be32(file, path);
    }
    const std::size_t n_items = dims[0];
    std::size_t n_features = 1;
    for (int d = 1; d < n_dims; ++d) {
        n_features *= dims[d];
    }

    std::vector<unsigned char> bytes(n_items * n_features);
    if (!file.read(reinterpret_cast<char*>(bytes.data()),
                   static_cast<std::streamsize>(bytes.size()))) {
        throw DataError(path + ": truncated idx payload");
    }

    Dataset data;
    data.points.resize(static_cast<Eigen::Index>(n_items), static_cast<Eigen::Index>(n_features));
    for (std::size_t i = 0; i < n_items; ++i) {
        for (std::size_t f = 0; f < n_features; ++f) {
            data.points(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(f)) =
                static_cast<double>(bytes[i * n_features + f]);
        }
    }

    if (labels_path.has_value()) {
        std::ifstream lab(*labels_path, std::ios::binary);
        if (!lab) {
            throw DataError("cannot open " + *labels_path);
        }
        const std::uint32_t lab_magic = read_be32(lab, *labels_path);
        if ((lab_magic >> 8) != 0x08 || (lab_magic & 0xff) != 1) {
            throw DataError(*labels_path + ": not an idx1 label file");
        }
        const std::uint32_t n_labels = read_be32(lab, *labels_path);
        if (n_labels != n_items) {
            throw DataError(*labels_path + ": label count does not match item count");
        }
        std::vector<unsigned char> raw(n_labels);
        if (!lab.read(reinterpret_cast<char*>(raw.data()),
                      static_cast<std::streamsize>(raw.size()))) {
            throw DataError(*labels_path + ": truncated label payload");
        }
        data.labels.assign(raw.begin(), raw.end());
    }
    data.validate();
    return data;
}

Dataset subsample(const Dataset& data, long max_points, std::uint64_t seed) {
    const long n = static_cast<long>(data.n_points());
    if (max_points < 0 || max_points >= n) {
        return data;
    }
    if (max_points < 2) {
        throw UsageError("max_points must be at least 2");
    }

    std::vector<long> indices(n);
    std::iota(indices.begin(), indices.end(), 0L);
    std::mt19937_64 rng(seed);
    for (long t = 0; t < max_points; ++t) {
        const long pick = t + static_cast<long>(rng() % static_cast<std::uint64_t>(n - t));
        std::swap(indices[t], indices[pick]);
    }
    indices.resize(max_points);
    std::sort(indices.begin(), indices.end());

    Dataset out;
    out.points.resize(max_points, data.n_features());
    for (long t = 0; t < max_points; ++t) {
        out.points.row(t) = data.points.row(indices[t]);
        if (data.has_labels()) {
            out.labels.push_back(data.labels[indices[t]]);
        }
        if (!data.ids.empty()) {
            out.ids.push_back(data.ids[indices[t]]);
        }
    }
    return out;
}

void write_embedding_csv(const std::string& path, const Dataset& data, const Embedding& emb) {
    std::ofstream file(path);
    if (!file) {
        throw DataError("cannot write " + path);
    }
    file << "id";
    for (Eigen::Index d = 0; d < emb.n_components(); ++d) {
        file << ",y_" << (d + 1);
    }
    file << "\n";

    char buf[64];
    for (Eigen::Index i = 0; i < emb.n_points(); ++i) {
        if (!data.ids.empty()) {
            file << data.ids[i];
        } else {
            file << i;
        }
        for (Eigen::Index d = 0; d < emb.n_components(); ++d) {
            std::snprintf(buf, sizeof buf, "%.17g", emb.coords(i, d));
            file << ',' << buf;
        }
        file << "\n";
    }
    if (!file) {
        throw DataError("write failed for " + path);
    }
}

Matrix read_embedding_csv(const std::string& path) {
    std::ifstream file(path);
    if (!file) {
        throw DataError("cannot open " + path);
    }
    std::string line;
    if (!std::getline(file, line)) {
        throw DataError(path + ": empty embedding file");
    }
    const std::size_t n_cols = split_csv_line(line).size();
    if (n_cols < 2) {
        throw DataError(path + ": expected id plus coordinates");
    }

    std::vector<double> values;
    std::size_t n_rows = 0;
    while (std::getline(file, line)) {
        if (line.empty()) {
            continue;
        }
        const auto cells = split_csv_line(line);
        if (cells.size() != n_cols) {
            throw DataError(path + ": ragged embedding row");
        }
        for (std::size_t c = 1; c < n_cols; ++c) {
            double v;
            if (!parse_double(cells[c], v)) {
                throw DataError(path + ": non-numeric coordinate");
            }
            values.push_back(v);
        }
        ++n_rows;
    }

    Matrix coords(n_rows, n_cols - 1);
    for (std::size_t i = 0; i < n_rows; ++i) {
        for (std::size_t d = 0; d + 1 < n_cols; ++d) {
            coords(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(d)) =
                values[i * (n_cols - 1) + d];
        }
    }
    return coords;
}

void write_embedding_svg(const std::string& path, const Dataset& data, const Embedding& emb) {
    static constexpr std::array<const char*, 10> kPalette = {
        "#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f",
        "#edc948", "#b07aa1", "#ff9da7", "#9c755f", "#bab0ac"};
    constexpr double kSize = 800.0;
    constexpr double kMargin = 40.0;

    const Eigen::Index n = emb.n_points();
    Eigen::VectorXd xs = emb.coords.col(0);
    Eigen::VectorXd ys = emb.n_components() >= 2 ? Eigen::VectorXd(emb.coords.col(1))
                                                 : Eigen::VectorXd(Eigen::VectorXd::Zero(n));

    const double x_min = xs.minCoeff();
    const double y_min = ys.minCoeff();
    const double x_span = std::max(xs.maxCoeff() - x_min, 1e-12);
    const double y_span = std::max(ys.maxCoeff() - y_min, 1e-12);
    const double scale = (kSize - 2.0 * kMargin) / std::max(x_span, y_span);

    std::ofstream file(path);
    if (!file) {
        throw DataError("cannot write " + path);
    }
    file << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
         << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kSize << "\" height=\""
         << kSize << "\" viewBox=\"0 0 " << kSize << " " << kSize << "\">\n"
         << "<rect width=\"" << kSize << "\" height=\"" << kSize << "\" fill=\"white\"/>\n";

    char buf[256];
    for (Eigen::Index i = 0; i < n; ++i) {
        const double cx = kMargin + (xs(i) - x_min) * scale;
        // flip y so larger coordinates plot higher
        const double cy = kSize - kMargin - (ys(i) - y_min) * scale;
        const char* color = kPalette[0];
        if (data.has_labels()) {
            const int lab = data.labels[i];
            color = lab < 0 ? "#999999" : kPalette[lab % kPalette.size()];
        }
        std::snprintf(buf, sizeof buf,
                      "<circle cx=\"%.2f\" cy=\"%.2f\" r=\"3\" fill=\"%s\" fill-opacity=\"0.8\"/>\n",
                      cx, cy, color);
        file << buf;
    }
    file << "</svg>\n";
    if (!file) {
        throw DataError("write failed for " + path);
    }
}

} // namespace conformap

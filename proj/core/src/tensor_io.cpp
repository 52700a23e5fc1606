#include "ognidc/tensor_io.hpp"

#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>

#include "ognidc/errors.hpp"

namespace ognidc {

namespace {

constexpr std::array<char, 4> kMagic = {'D', 'T', 'E', 'N'};
constexpr std::uint32_t kVersion = 1;

void put_u32(std::ostream& out, std::uint32_t v) {
    std::array<char, 4> b;
    for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
    out.write(b.data(), b.size());
}

void put_u64(std::ostream& out, std::uint64_t v) {
    std::array<char, 8> b;
    for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
    out.write(b.data(), b.size());
}

void put_f64(std::ostream& out, double v) { put_u64(out, std::bit_cast<std::uint64_t>(v)); }

std::uint32_t get_u32(std::istream& in) {
    std::array<unsigned char, 4> b;
    in.read(reinterpret_cast<char*>(b.data()), b.size());
    if (!in) throw IoError("unexpected end of file while reading u32");
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
    return v;
}

std::uint64_t get_u64(std::istream& in) {
    std::array<unsigned char, 8> b;
    in.read(reinterpret_cast<char*>(b.data()), b.size());
    if (!in) throw IoError("unexpected end of file while reading u64");
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    return v;
}

double get_f64(std::istream& in) { return std::bit_cast<double>(get_u64(in)); }

// Zero is legitimate here: a 1-wide gradient field has an empty gx payload.
int dim_as_int(std::uint64_t d) {
    if (d > static_cast<std::uint64_t>(std::numeric_limits<int>::max())) {
        throw IoError("tensor dimension out of range: " + std::to_string(d));
    }
    return static_cast<int>(d);
}

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path.string());
    return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open for reading: " + path.string());
    return in;
}

}  // namespace

std::size_t Tensor::element_count() const {
    std::size_t n = 1;
    for (std::uint64_t d : dims) n *= static_cast<std::size_t>(d);
    return dims.empty() ? 0 : n;
}

void write_dten(std::ostream& out, const Tensor& t) {
    if (t.data.size() != t.element_count()) {
        throw ShapeError("tensor data size does not match its dimensions");
    }
    out.write(kMagic.data(), kMagic.size());
    put_u32(out, kVersion);
    put_u32(out, static_cast<std::uint32_t>(t.dims.size()));
    for (std::uint64_t d : t.dims) put_u64(out, d);
    for (double v : t.data) put_f64(out, v);
    if (!out) throw IoError("write failure while emitting tensor");
}

Tensor read_dten(std::istream& in) {
    std::array<char, 4> magic;
    in.read(magic.data(), magic.size());
    if (!in || magic != kMagic) throw IoError("not a DTEN stream (bad magic)");
    const std::uint32_t version = get_u32(in);
    if (version != kVersion) {
        throw IoError("unsupported DTEN version " + std::to_string(version));
    }
    const std::uint32_t rank = get_u32(in);
    if (rank > 8) throw IoError("unreasonable tensor rank " + std::to_string(rank));
    Tensor t;
    t.dims.resize(rank);
    for (auto& d : t.dims) d = get_u64(in);
    const std::size_t n = t.element_count();
    if (n > (std::size_t{1} << 31)) throw IoError("tensor too large to load");
    t.data.resize(n);
    for (auto& v : t.data) v = get_f64(in);
    return t;
}

void write_dten_file(const std::filesystem::path& path, const Tensor& t) {
    auto out = open_out(path);
    write_dten(out, t);
}

Tensor read_dten_file(const std::filesystem::path& path) {
    auto in = open_in(path);
    return read_dten(in);
}

Tensor to_tensor(const DepthMap& map) {
    return Tensor{{static_cast<std::uint64_t>(map.height),
                   static_cast<std::uint64_t>(map.width)},
                  map.values};
}

DepthMap depth_from_tensor(const Tensor& t) {
    if (t.dims.size() != 2) {
        throw IoError("expected a rank-2 tensor, got rank " + std::to_string(t.dims.size()));
    }
    return DepthMap(dim_as_int(t.dims[0]), dim_as_int(t.dims[1]), t.data);
}

ConfidenceMap confidence_from_tensor(const Tensor& t) {
    if (t.dims.size() != 2) {
        throw IoError("expected a rank-2 tensor, got rank " + std::to_string(t.dims.size()));
    }
    return ConfidenceMap(dim_as_int(t.dims[0]), dim_as_int(t.dims[1]), t.data);
}

void write_depth_file(const std::filesystem::path& path, const DepthMap& map) {
    write_dten_file(path, to_tensor(map));
}

DepthMap read_depth_file(const std::filesystem::path& path) {
    return depth_from_tensor(read_dten_file(path));
}

void write_gradient_file(const std::filesystem::path& path, const GradientField& g) {
    auto out = open_out(path);
    put_u32(out, 2);
    write_dten(out, Tensor{{static_cast<std::uint64_t>(g.height),
                            static_cast<std::uint64_t>(g.width - 1)},
                           g.gx});
    write_dten(out, Tensor{{static_cast<std::uint64_t>(g.height - 1),
                            static_cast<std::uint64_t>(g.width)},
                           g.gy});
}

GradientField read_gradient_file(const std::filesystem::path& path) {
    auto in = open_in(path);
    const std::uint32_t entries = get_u32(in);
    if (entries != 2) {
        throw IoError("gradient file must hold 2 tensors, found " + std::to_string(entries));
    }
    Tensor tx = read_dten(in);
    Tensor ty = read_dten(in);
    if (tx.dims.size() != 2 || ty.dims.size() != 2) {
        throw IoError("gradient payloads must be rank-2 tensors");
    }
    const int h = dim_as_int(tx.dims[0]);
    const int w = dim_as_int(tx.dims[1]) + 1;
    if (dim_as_int(ty.dims[0]) != h - 1 || dim_as_int(ty.dims[1]) != w) {
        throw IoError("gx and gy payload dimensions are inconsistent");
    }
    return GradientField(h, w, std::move(tx.data), std::move(ty.data));
}

void write_observations_csv(const std::filesystem::path& path, const SparseObservations& obs) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open for writing: " + path.string());
    out << "row,col,depth\n";
    std::ostringstream line;
    line.precision(17);
    for (int y = 0; y < obs.height; ++y) {
        for (int x = 0; x < obs.width; ++x) {
            if (!obs.mask[obs.idx(y, x)]) continue;
            line.str("");
            line << y << "," << x << "," << obs.values[obs.idx(y, x)] << "\n";
            out << line.str();
        }
    }
    if (!out) throw IoError("write failure while emitting observations CSV");
}

SparseObservations read_observations_csv(const std::filesystem::path& path, int height,
                                         int width) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open for reading: " + path.string());
    SparseObservations obs(height, width);
    std::string line;
    if (!std::getline(in, line)) throw IoError("empty observations CSV");
    // Tolerate an optional UTF-8 BOM and trailing CR.
    if (line.size() >= 3 && line.compare(0, 3, "\xef\xbb\xbf") == 0) line.erase(0, 3);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "row,col,depth") {
        throw IoError("observations CSV must start with header 'row,col,depth'");
    }
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::istringstream ss(line);
        long row = 0, col = 0;
        double depth = 0.0;
        char c1 = 0, c2 = 0;
        if (!(ss >> row >> c1 >> col >> c2 >> depth) || c1 != ',' || c2 != ',') {
            throw IoError("malformed CSV line " + std::to_string(lineno));
        }
        if (row < 0 || row >= height || col < 0 || col >= width) {
            throw IoError("observation at line " + std::to_string(lineno) +
                          " is outside the " + std::to_string(height) + "x" +
                          std::to_string(width) + " grid");
        }
        if (!std::isfinite(depth)) {
            throw DomainError("non-finite depth at line " + std::to_string(lineno));
        }
        if (obs.mask[obs.idx(static_cast<int>(row), static_cast<int>(col))]) {
            throw IoError("duplicate observation at line " + std::to_string(lineno));
        }
        obs.set(static_cast<int>(row), static_cast<int>(col), depth);
    }
    return obs;
}

}  // namespace ognidc

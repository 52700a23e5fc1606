#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <vector>

#include "ognidc/grid.hpp"

namespace ognidc {

// Generic dense tensor as stored in a DTEN file:
//   magic "DTEN", u32 version (=1), u32 rank, rank x u64 dims,
//   then row-major float64, all little-endian.
struct Tensor {
    std::vector<std::uint64_t> dims;
    std::vector<double> data;

    std::size_t element_count() const;
};

void write_dten(std::ostream& out, const Tensor& t);
Tensor read_dten(std::istream& in);

void write_dten_file(const std::filesystem::path& path, const Tensor& t);
Tensor read_dten_file(const std::filesystem::path& path);

Tensor to_tensor(const DepthMap& map);
DepthMap depth_from_tensor(const Tensor& t);  // requires rank 2
ConfidenceMap confidence_from_tensor(const Tensor& t);

void write_depth_file(const std::filesystem::path& path, const DepthMap& map);
DepthMap read_depth_file(const std::filesystem::path& path);

// A gradient field is stored as a u32 entry count (=2) followed by two DTEN
// payloads: gx with dims (H, W-1), then gy with dims (H-1, W).
void write_gradient_file(const std::filesystem::path& path, const GradientField& g);
GradientField read_gradient_file(const std::filesystem::path& path);

// Sparse observations travel as CSV with header "row,col,depth", 0-based
// indices, depth in meters. Grid dimensions are supplied by the caller.
void write_observations_csv(const std::filesystem::path& path, const SparseObservations& obs);
SparseObservations read_observations_csv(const std::filesystem::path& path, int height, int width);

}  // namespace ognidc

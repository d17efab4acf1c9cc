#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lacsim/numeric.hpp"

namespace lacsim {

// Convolution layer geometry. Fully-connected layers are expressed as
// convolutions whose filter matches the input (single window).
struct LayerShape {
    int channels = 1;
    int input_x = 1;   // rows
    int input_y = 1;   // columns
    int filters = 1;
    int filter_h = 1;
    int filter_k = 1;
    int stride = 1;

    int out_h() const { return (input_x - filter_h) / stride + 1; }
    int out_k() const { return (input_y - filter_k) / stride + 1; }
    int windows() const { return out_h() * out_k(); }
    // Scalar multiplications in the layer.
    uint64_t products() const;

    void validate() const;  // throws std::invalid_argument on bad geometry
};

struct WindowCoord {
    int row = 0;
    int col = 0;

    bool operator==(const WindowCoord&) const = default;
};

// Row-major enumeration of the out_h x out_k window origins.
std::vector<WindowCoord> enumerate_windows(const LayerShape& layer);

// A tensor of quantized values sharing one precision. Activations are
// (channels, x, y); weights are (filters, channels, h, k). Elements are
// stored channel-major, row-major.
struct TensorTrace {
    std::vector<int> dims;
    int precision = 16;
    std::vector<int16_t> data;

    size_t element_count() const;
    QVal at(size_t index) const { return QVal{data[index], static_cast<uint8_t>(precision)}; }

    void validate() const;  // element count and per-element range

    bool operator==(const TensorTrace&) const = default;
};

// Deterministic synthetic tensor: exactly round(density * n) nonzero
// elements, values uniform over the nonzero range representable at
// `precision` bits, positions and values drawn from the seed.
TensorTrace gen_synthetic(const std::vector<int>& dims, double density, int precision,
                          uint64_t seed);

// Binary trace file, bit-exact round trip. Distinct parse errors for bad
// magic/version, element count mismatch, and out-of-range elements.
void save_trace(const std::string& path, const TensorTrace& trace);
TensorTrace load_trace(const std::string& path);

// Per-layer activation precision plus one network-wide weight precision.
struct PrecisionProfile {
    std::string name;
    std::vector<int> act_bits;
    int weight_bits = 16;

    void validate() const;
};

// One tile step: `windows` PE columns sharing activations, `filters` PE
// rows sharing weights, `lanes` products per PE. Zero values double as
// padding; they carry no terms.
struct GroupTrace {
    int windows = 0;
    int filters = 0;
    int lanes = 0;
    int window_base = 0;   // global index of the first window column
    int filter_base = 0;   // global index of the first filter row
    int chunk_index = 0;
    int chunk_count = 1;
    std::vector<int16_t> acts;  // [windows][lanes]
    std::vector<int16_t> wgts;  // [filters][lanes]

    int16_t act(int window, int lane) const { return acts[window * lanes + lane]; }
    int16_t wgt(int filter, int lane) const { return wgts[filter * lanes + lane]; }
};

struct GroupSource {
    virtual std::optional<GroupTrace> next() = 0;
    virtual ~GroupSource() = default;
};

struct TileGeometry {
    int windows_parallel = 16;
    int filters_parallel = 8;
    int lanes_per_pe = 16;
};

// Streams the layer's multiply set as tile steps: window batches (row-major
// windows), filter batches, then one chunk per filter position and
// 16-channel slice. Every (activation, weight) product appears exactly
// once; ragged edges are zero-padded.
class GroupStream final : public GroupSource {
  public:
    GroupStream(const LayerShape& layer, const TensorTrace& acts, const TensorTrace& wgts,
                const TileGeometry& tile);

    std::optional<GroupTrace> next() override;

    uint64_t total_groups() const { return total_groups_; }
    int chunks_per_batch() const { return chunk_total_; }

  private:
    GroupTrace make_group() const;

    const LayerShape layer_;
    const TensorTrace* acts_;
    const TensorTrace* wgts_;
    TileGeometry tile_;
    std::vector<WindowCoord> windows_;
    int window_batches_ = 0;
    int filter_batches_ = 0;
    int channel_chunks_ = 0;
    int chunk_total_ = 0;  // filter_h * filter_k * channel_chunks
    uint64_t total_groups_ = 0;
    uint64_t emitted_ = 0;
};

GroupStream build_groups(const LayerShape& layer, const TensorTrace& acts,
                         const TensorTrace& wgts, const TileGeometry& tile);

// A named layer with its tensors.
struct LayerData {
    std::string name;
    LayerShape shape;
    TensorTrace acts;
    TensorTrace wgts;
};

struct Network {
    std::string name;
    std::vector<LayerData> layers;
};

// Re-quantizes every tensor to the profile's widths. Layer count must
// match the profile.
void quantize_network(Network& net, const PrecisionProfile& profile);

// A parsed network description: tensors plus the precisions the file
// declared (defaults to 16 bits wherever unspecified).
struct NetworkDesc {
    Network net;
    PrecisionProfile profile;
};

// Loads a network description (JSON): layer shapes plus, per layer, either
// trace file paths or synthetic generation parameters. Relative trace
// paths resolve against the description file's directory.
NetworkDesc load_network(const std::string& path);

}  // namespace lacsim

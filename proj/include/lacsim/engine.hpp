#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "lacsim/numeric.hpp"
#include "lacsim/workload.hpp"

namespace lacsim {

enum class EngineKind { Base, Lm, Lac };

std::string to_string(EngineKind kind);

// One engine variant. BASE reads weights bit-parallel (16 wires per
// weight) and consumes one window per cycle; LM and LAC read one wire per
// weight and consume 16 windows per tile step.
struct EngineConfig {
    EngineKind kind = EngineKind::Base;
    int filters_parallel = 8;
    int windows_parallel = 1;
    int lanes_per_pe = 16;
    TermEncoding encoding = TermEncoding::Booth;
    std::string label;

    static EngineConfig base_2k();
    static EngineConfig lm();
    // weight_wires must be a multiple of 16; filters_parallel = wires / 16.
    static EngineConfig lac(int weight_wires, TermEncoding encoding = TermEncoding::Booth);
    // Parses the CLI syntax: "base:2k", "lm", "lac:128|256|512|1k|...".
    static EngineConfig parse(const std::string& spec,
                              TermEncoding lac_encoding = TermEncoding::Booth);

    int weight_wires() const;
    int activation_wires() const;
    TileGeometry tile() const;
    void validate() const;
};

// Per-layer outcome of one engine over one group stream.
struct LayerRun {
    uint64_t cycles = 0;
    uint64_t groups = 0;
    int64_t checksum = 0;  // sum of the output activations the stream covers
};

// Bit-parallel baseline: every group costs one cycle.
LayerRun base_cycles(GroupSource& work, const EngineConfig& cfg);

// Bit-serial engine: every group costs act_bits * weight_bits cycles.
LayerRun lm_cycles(GroupSource& work, const EngineConfig& cfg, int act_bits, int weight_bits);

// Term-serial engine: every group costs the largest per-lane term cross
// product over all PEs, minimum one cycle; outputs flow through the PE
// datapath.
LayerRun lac_cycles(GroupSource& work, const EngineConfig& cfg);

struct LayerCycles {
    std::string layer;
    uint64_t cycles = 0;
    uint64_t groups = 0;
    int64_t checksum = 0;
};

struct CycleReport {
    std::string config;
    uint64_t total_cycles = 0;
    uint64_t groups = 0;
    int64_t checksum = 0;
    std::vector<LayerCycles> per_layer;
    // Ratio of the other config's total cycles to this config's; > 1 means
    // this config is faster on the identical workload.
    std::map<std::string, double> speedup_vs;
};

// Runs every config over the profile-quantized network. Identical inputs
// produce identical reports.
std::vector<CycleReport> simulate(const Network& net, const std::vector<EngineConfig>& cfgs,
                                  const PrecisionProfile& profile);

}  // namespace lacsim

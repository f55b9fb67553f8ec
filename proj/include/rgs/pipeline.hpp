#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rgs/compact.hpp"
#include "rgs/pruning.hpp"
#include "rgs/quantization.hpp"
#include "rgs/sh_culling.hpp"
#include "rgs/types.hpp"

namespace rgs {

enum class Preset { Default, Low, High };

struct PipelineConfig {
    Preset preset = Preset::Default;
    float lambda_r = 1.0f;
    int score_floor = 3; // 2 for the high-compression preset
    ShThresholds sh = sh_thresholds_default();
    int prune_passes = 3;
    int neighbor_count = 30;
    float opacity_fraction = 0.03f;
    float opacity_cap = 0.05f;
    int eval_max_dim = 256;  // holdout render resolution cap
    int stats_max_dim = 256; // transmittance statistics resolution cap
    int holdout_stride = 8;  // every n-th view held out for quality tracking
    std::uint64_t seed = 0;  // recorded for reproducibility; the pipeline itself is deterministic
    // Quality budgets are expressed as an equivalent PSNR drop at a reference
    // operating quality (see equivalent_psnr_floor); a prune pass whose
    // holdout render falls below the floor is rolled back.
    double quality_reference_db = 30.0;
    double prune_quality_budget_db = 0.5;
    QuantizeConfig quantize;
    bool enable_prune = true;
    bool enable_sh = true;
};

PipelineConfig make_preset(Preset preset);
const char* preset_name(Preset preset);

// Cross-render PSNR floor equivalent to losing `drop_db` against ground truth
// at `reference_db` operating quality, assuming independent error sources
// (MSE addition): floor = reference - 10*log10(10^(drop/10) - 1).
double equivalent_psnr_floor(double drop_db, double reference_db);

struct StageRecord {
    std::string name;
    std::uint64_t primitive_count = 0;
    std::uint64_t bytes = 0;
    double gain_vs_previous = 1.0;
    double gain_vs_baseline = 1.0;
    double psnr_db = 0.0; // pooled-MSE PSNR vs the input scene's holdout renders
    double ssim = 1.0;
    double wall_seconds = 0.0;
    std::string note;
};

struct StageReport {
    std::vector<StageRecord> stages;

    std::string to_csv() const;
    std::string to_table() const;
};

struct CompressResult {
    CompactScene compact;
    std::vector<std::uint8_t> bytes; // encoded compact payload
    StageReport report;
    std::vector<PruneSummary> prune_summaries;
    BandAssignment bands;
    ShCullSummary sh_summary;
    Scene processed; // after pruning and SH culling, before quantization
};

// prune passes -> SH culling -> quantization -> compact encoding, with
// per-stage byte accounting and holdout quality tracking.
//
// Stage boundaries apply the PLY storage canonicalization, so chaining the
// prune / cull-sh / quantize subcommands through checkpoint files produces
// bit-identical output. `canonicalize_input` stands in for the file read the
// CLI performs; callers whose scene already came from read_3dgs_ply pass
// false.
CompressResult compress(const Scene& input, const PipelineConfig& config = {},
                        bool canonicalize_input = true);

// Holdout subset of `views` (every config.holdout_stride-th view) downscaled
// to config.eval_max_dim.
std::vector<CameraView> holdout_views(const std::vector<CameraView>& views,
                                      const PipelineConfig& config);

// Pooled-MSE PSNR / mean SSIM between per-view render pairs.
struct QualityScore {
    double psnr_db = 0.0;
    double ssim = 1.0;
};
QualityScore render_quality(const Scene& reference, const Scene& candidate,
                            const std::vector<CameraView>& views);

} // namespace rgs

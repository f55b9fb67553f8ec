#include "rgs/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>

#include "rgs/memory_report.hpp"
#include "rgs/ply_io.hpp"
#include "rgs/rasterizer.hpp"

namespace rgs {

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

QualityScore quality_against(const std::vector<RenderedImage>& refs, const Scene& candidate,
                             const std::vector<CameraView>& views) {
    QualityScore q;
    if (views.empty()) {
        q.psnr_db = std::numeric_limits<double>::infinity();
        return q;
    }
    double se = 0.0;
    std::uint64_t samples = 0;
    double ssim_sum = 0.0;
    for (std::size_t v = 0; v < views.size(); ++v) {
        const RenderedImage img = render(candidate, views[v]);
        for (std::size_t i = 0; i < img.rgb.size(); ++i) {
            const double d = static_cast<double>(img.rgb[i]) - refs[v].rgb[i];
            se += d * d;
        }
        samples += img.rgb.size();
        ssim_sum += ssim(refs[v], img);
    }
    const double mse = se / static_cast<double>(samples);
    q.psnr_db = mse == 0.0 ? std::numeric_limits<double>::infinity() : 10.0 * std::log10(1.0 / mse);
    q.ssim = ssim_sum / static_cast<double>(views.size());
    return q;
}

} // namespace

PipelineConfig make_preset(Preset preset) {
    PipelineConfig config;
    config.preset = preset;
    switch (preset) {
    case Preset::Default:
        config.sh = sh_thresholds_default();
        config.score_floor = 3;
        break;
    case Preset::Low:
        config.sh = sh_thresholds_low();
        config.score_floor = 3;
        break;
    case Preset::High:
        config.sh = sh_thresholds_high();
        config.score_floor = 2;
        break;
    }
    return config;
}

const char* preset_name(Preset preset) {
    switch (preset) {
    case Preset::Default: return "default";
    case Preset::Low: return "low";
    case Preset::High: return "high";
    }
    return "?";
}

double equivalent_psnr_floor(double drop_db, double reference_db) {
    if (drop_db <= 0.0)
        return std::numeric_limits<double>::infinity();
    return reference_db - 10.0 * std::log10(std::pow(10.0, drop_db / 10.0) - 1.0);
}

std::vector<CameraView> holdout_views(const std::vector<CameraView>& views,
                                      const PipelineConfig& config) {
    std::vector<CameraView> out;
    const int stride = std::max(1, config.holdout_stride);
    for (std::size_t i = 0; i < views.size(); i += static_cast<std::size_t>(stride))
        out.push_back(views[i].scaled_to_max_dim(config.eval_max_dim));
    return out;
}

QualityScore render_quality(const Scene& reference, const Scene& candidate,
                            const std::vector<CameraView>& views) {
    std::vector<RenderedImage> refs;
    refs.reserve(views.size());
    for (const auto& v : views)
        refs.push_back(render(reference, v));
    return quality_against(refs, candidate, views);
}

CompressResult compress(const Scene& input, const PipelineConfig& config,
                        bool canonicalize_input) {
    CompressResult result;
    Scene current = input;
    if (canonicalize_input)
        canonicalize_like_storage(current.primitives);

    const std::uint64_t baseline_count = current.primitives.size();
    const std::vector<CameraView> eval_views = holdout_views(current.views, config);
    std::vector<RenderedImage> refs;
    refs.reserve(eval_views.size());
    for (const auto& v : eval_views)
        refs.push_back(render(current, v));

    const std::uint64_t baseline_bytes =
        memory_report(current.primitives, baseline_count).total_bytes;

    auto push_stage = [&](const std::string& name, std::uint64_t count, std::uint64_t bytes,
                          const QualityScore& q, double secs, const std::string& note = {}) {
        StageRecord rec;
        rec.name = name;
        rec.primitive_count = count;
        rec.bytes = bytes;
        const std::uint64_t prev_bytes =
            result.report.stages.empty() ? bytes : result.report.stages.back().bytes;
        rec.gain_vs_previous = bytes ? static_cast<double>(prev_bytes) / static_cast<double>(bytes) : 0;
        rec.gain_vs_baseline =
            bytes ? static_cast<double>(baseline_bytes) / static_cast<double>(bytes) : 0;
        rec.psnr_db = q.psnr_db;
        rec.ssim = q.ssim;
        rec.wall_seconds = secs;
        rec.note = note;
        result.report.stages.push_back(rec);
    };

    push_stage("baseline", baseline_count, baseline_bytes,
               {std::numeric_limits<double>::infinity(), 1.0}, 0.0);

    if (config.enable_prune && config.prune_passes > 0 && !current.views.empty()) {
        const auto start = std::chrono::steady_clock::now();
        const double floor =
            equivalent_psnr_floor(config.prune_quality_budget_db, config.quality_reference_db);
        PruneConfig prune_config;
        prune_config.redundancy.lambda_r = config.lambda_r;
        prune_config.redundancy.score_floor = config.score_floor;
        prune_config.redundancy.neighbor_count = config.neighbor_count;
        prune_config.opacity_fraction = config.opacity_fraction;
        prune_config.opacity_cap = config.opacity_cap;

        QualityScore q{std::numeric_limits<double>::infinity(), 1.0};
        std::string note;
        for (int pass = 0; pass < config.prune_passes; ++pass) {
            auto [candidate, summary] = prune_pass(current, prune_config);
            if (summary.removed_total == 0) {
                result.prune_summaries.push_back(summary);
                break;
            }
            const QualityScore candidate_q = quality_against(refs, candidate, eval_views);
            if (candidate_q.psnr_db < floor) {
                note = "pass " + std::to_string(pass + 1) + " rolled back (quality floor " +
                       std::to_string(floor) + " dB)";
                break;
            }
            current = std::move(candidate);
            q = candidate_q;
            result.prune_summaries.push_back(summary);
        }
        push_stage("prune", current.primitives.size(),
                   memory_report(current.primitives, baseline_count).total_bytes, q,
                   seconds_since(start), note);
    }

    if (config.enable_sh && !current.views.empty()) {
        const auto start = std::chrono::steady_clock::now();
        TransmittanceStatsOptions stats_options;
        stats_options.max_dim = config.stats_max_dim;
        auto [bands, summary] = cull_sh(current, config.sh, stats_options);
        result.bands = std::move(bands);
        result.sh_summary = summary;
        const QualityScore q = quality_against(refs, current, eval_views);
        push_stage("sh-cull", current.primitives.size(),
                   memory_report(current.primitives, baseline_count).total_bytes, q,
                   seconds_since(start));
    }

    {
        const auto start = std::chrono::steady_clock::now();
        result.compact = quantize_scene(current, config.quantize);
        result.bytes = encode_compact(result.compact);
        Scene decoded;
        decoded.views = current.views;
        decoded.primitives = expand_compact(result.compact);
        const QualityScore q = quality_against(refs, decoded, eval_views);
        push_stage("quantize", result.compact.primitive_count(), result.bytes.size(), q,
                   seconds_since(start));
    }

    result.processed = std::move(current);
    return result;
}

std::string StageReport::to_csv() const {
    std::ostringstream out;
    out << "stage,primitives,bytes,gain_vs_previous,gain_vs_baseline,psnr_db,ssim,seconds,note\n";
    for (const auto& s : stages) {
        out << s.name << ',' << s.primitive_count << ',' << s.bytes << ',' << s.gain_vs_previous
            << ',' << s.gain_vs_baseline << ',' << s.psnr_db << ',' << s.ssim << ','
            << s.wall_seconds << ',' << s.note << '\n';
    }
    return out.str();
}

std::string StageReport::to_table() const {
    std::ostringstream out;
    out << std::left << std::setw(10) << "stage" << std::right << std::setw(12) << "primitives"
        << std::setw(14) << "bytes" << std::setw(10) << "gain" << std::setw(10) << "total"
        << std::setw(10) << "psnr" << std::setw(9) << "ssim" << std::setw(9) << "sec"
        << "\n";
    out << std::fixed;
    for (const auto& s : stages) {
        out << std::left << std::setw(10) << s.name << std::right << std::setw(12)
            << s.primitive_count << std::setw(14) << s.bytes << std::setw(9) << std::setprecision(2)
            << s.gain_vs_previous << 'x' << std::setw(9) << std::setprecision(2)
            << s.gain_vs_baseline << 'x';
        if (std::isinf(s.psnr_db))
            out << std::setw(10) << "inf";
        else
            out << std::setw(10) << std::setprecision(2) << s.psnr_db;
        out << std::setw(9) << std::setprecision(4) << s.ssim << std::setw(9)
            << std::setprecision(1) << s.wall_seconds;
        if (!s.note.empty())
            out << "  " << s.note;
        out << "\n";
    }
    return out.str();
}

} // namespace rgs

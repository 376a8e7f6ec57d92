#include "spp/model/trainer.hpp"

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "spp/image/png_io.hpp"
#include "spp/nn/adam.hpp"

namespace spp::model {

namespace {

double now_seconds() {
    return std::chrono::duration<double>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

SeqBatch assemble(const std::vector<VideoItem>& items, const std::vector<int>& order, int start,
                  int lo, int hi, const PredictorConfig& cfg,
                  const std::vector<nn::Tensor>& noise_pool) {
    SeqBatch batch;
    batch.n = hi - lo;
    const int horizon = cfg.horizon;
    std::vector<const VideoItem*> chunk;
    for (int i = lo; i < hi; ++i) {
        chunk.push_back(&items[static_cast<std::size_t>(
            order[static_cast<std::size_t>(start + i)])]);
    }
    for (int t = 0; t <= horizon; ++t) {
        std::vector<const img::Image*> frames;
        for (const VideoItem* it : chunk) {
            frames.push_back(&it->frames[static_cast<std::size_t>(t)]);
        }
        batch.frames.push_back(VideoPredictor::frames_to_tensor(frames));
    }
    if (cfg.mode != ConditioningMode::None) {
        const int dim = static_cast<int>(chunk[0]->cond[0].size());
        for (int t = 0; t < horizon; ++t) {
            nn::Tensor c({batch.n, dim});
            for (int i = 0; i < batch.n; ++i) {
                const auto& v = chunk[static_cast<std::size_t>(i)]->cond[
                    static_cast<std::size_t>(t)];
                std::copy(v.begin(), v.end(), c.ptr() + static_cast<std::size_t>(i) * dim);
            }
            batch.cond.push_back(std::move(c));
        }
    }
    // noise_pool holds the full batch [B, d_z] per step; slice this chunk
    for (int t = 0; t < horizon; ++t) {
        nn::Tensor e({batch.n, cfg.d_z});
        std::copy_n(noise_pool[static_cast<std::size_t>(t)].ptr() +
                        static_cast<std::size_t>(lo) * cfg.d_z,
                    static_cast<std::size_t>(batch.n) * cfg.d_z, e.ptr());
        batch.noise.push_back(std::move(e));
    }
    return batch;
}

}  // namespace

std::vector<VideoItem> build_items(const datagen::Dataset& dataset, const std::string& split,
                                   const Conditioner& conditioner, int horizon) {
    std::vector<VideoItem> items;
    for (std::size_t i : dataset.indices_for_split(split)) {
        const datagen::Demonstration d = dataset.load(i);
        VideoItem item;
        item.frames = d.frames;
        item.word = d.scene.word;
        item.high_level = d.high_level;
        item.low_level = d.low_level;
        item.cond = conditioner.step_vectors(d.high_level, d.low_level, horizon);
        items.push_back(std::move(item));
    }
    return items;
}

TrainResult train_predictor(VideoPredictor& model, const std::vector<VideoItem>& items,
                            const TrainOptions& opts) {
    const PredictorConfig& cfg = model.config();
    if (items.empty()) throw ConfigError("train_predictor: no training videos");
    if (cfg.epochs <= 0 || cfg.batch <= 0 || cfg.lr <= 0.0f) {
        throw ConfigError("train_predictor: degenerate hyperparameters");
    }
    for (const VideoItem& it : items) {
        if (static_cast<int>(it.frames.size()) < cfg.horizon + 1) {
            throw ConfigError("video has fewer frames than horizon+1");
        }
    }

    nn::Adam opt(cfg.lr);
    Rng rng(Rng::mix(cfg.seed, 0x7472ULL));
    std::vector<int> order(items.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);

    std::ofstream trace;
    if (!opts.trace_path.empty()) {
        std::filesystem::create_directories(
            std::filesystem::path(opts.trace_path).parent_path());
        trace.open(opts.trace_path, std::ios::trunc);
    }

    TrainResult result;
    const double t0 = now_seconds();
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        rng.shuffle(order);
        double recon_sum = 0.0, kl_sum = 0.0, total_sum = 0.0;
        int seen = 0;
        for (std::size_t start = 0; start < order.size();
             start += static_cast<std::size_t>(cfg.batch)) {
            const int n = static_cast<int>(
                std::min<std::size_t>(cfg.batch, order.size() - start));
            // Noise for the whole batch, sampled once in a fixed order so the
            // result does not depend on worker count of the chunking below.
            std::vector<nn::Tensor> noise_pool;
            for (int t = 0; t < cfg.horizon; ++t) {
                nn::Tensor e({n, cfg.d_z});
                for (float& x : e.data) x = rng.normal_f();
                noise_pool.push_back(std::move(e));
            }
            // per-chunk means keyed by the chunk's first index, with weight
            std::vector<std::pair<LossBreakdown, int>> chunk_losses(
                static_cast<std::size_t>(n), {LossBreakdown{}, 0});
            auto bg = nn::compute_grads(
                model.params(), n, opts.workers,
                [&](const nn::Bound& bp, int lo, int hi) {
                    SeqBatch batch = assemble(items, order, static_cast<int>(start), lo, hi,
                                              cfg, noise_pool);
                    LossBreakdown lb;
                    nn::Var loss = model.build_loss(bp, batch, &lb);
                    chunk_losses[static_cast<std::size_t>(lo)] = {lb, hi - lo};
                    return loss;
                });
            nn::scale_grads(bg.grads, 1.0f / static_cast<float>(n));
            nn::clip_grads(bg.grads, cfg.grad_clip);
            const double batch_loss = bg.loss_sum / n;
            if (!std::isfinite(batch_loss)) {
                if (trace.is_open()) {
                    nlohmann::ordered_json dump{{"event", "non_finite_loss"},
                                                {"epoch", epoch},
                                                {"items_seen", seen},
                                                {"loss", batch_loss}};
                    trace << dump.dump() << "\n";
                }
                throw NonFiniteLoss("loss became non-finite at epoch " + std::to_string(epoch));
            }
            opt.step(model.params(), bg.grads);

            for (const auto& [lb, w] : chunk_losses) {
                if (w == 0) continue;
                recon_sum += lb.reconstruction * w;
                kl_sum += lb.kl * w;
                total_sum += lb.total * w;
            }
            seen += n;
        }
        LossBreakdown epoch_mean{total_sum / seen, recon_sum / seen, kl_sum / seen};
        result.epoch_losses.push_back(epoch_mean);
        if (trace.is_open()) {
            nlohmann::ordered_json line{{"epoch", epoch},
                                        {"recon", epoch_mean.reconstruction},
                                        {"kl", epoch_mean.kl},
                                        {"total", epoch_mean.total},
                                        {"wall_time", now_seconds() - t0}};
            trace << line.dump() << "\n";
        }

        const bool checkpoint_now =
            opts.checkpoint_every > 0 && (epoch + 1) % opts.checkpoint_every == 0;
        if ((checkpoint_now || epoch + 1 == cfg.epochs) && !opts.snapshot_dir.empty()) {
            std::filesystem::create_directories(opts.snapshot_dir);
            const VideoItem& probe = items[0];
            const auto rolled =
                model.rollout(probe.frames[0], probe.cond, cfg.horizon, 1234);
            std::vector<img::Image> strip;
            for (const auto& f : probe.frames) strip.push_back(f);
            strip.push_back(probe.frames[0]);
            for (const auto& f : rolled) strip.push_back(f);
            img::write_png(opts.snapshot_dir + "/rollout_epoch_" + std::to_string(epoch + 1) +
                               ".png",
                           img::montage(strip, cfg.horizon + 1));
        }
        if (checkpoint_now && !opts.checkpoint_path.empty()) {
            model.save(opts.checkpoint_path + ".epoch" + std::to_string(epoch + 1), "{}", &opt);
        }
    }
    if (!opts.checkpoint_path.empty()) {
        nlohmann::ordered_json extra{{"epoch", cfg.epochs}};
        model.save(opts.checkpoint_path, extra.dump(), &opt);
    }
    return result;
}

double autoencoder_overfit(VideoPredictor& model, const std::vector<img::Image>& frames,
                           int steps, float lr, int workers) {
    if (frames.empty()) throw ConfigError("autoencoder_overfit: no frames");
    nn::Adam opt(lr);
    std::vector<nn::Tensor> tensors;
    for (const img::Image& f : frames) tensors.push_back(VideoPredictor::frames_to_tensor({&f}));

    const int n = static_cast<int>(frames.size());
    for (int step = 0; step < steps; ++step) {
        auto bg = nn::compute_grads(
            model.params(), n, workers, [&](const nn::Bound& bp, int lo, int hi) {
                std::vector<const img::Image*> chunk;
                for (int i = lo; i < hi; ++i) {
                    chunk.push_back(&frames[static_cast<std::size_t>(i)]);
                }
                nn::Var x = nn::leaf(VideoPredictor::frames_to_tensor(chunk));
                auto enc = model.encode(bp, x);
                nn::Var rec = model.decode(bp, enc.features, model.zero_skips(hi - lo));
                return nn::scale(nn::mse_loss(rec, x), static_cast<float>(hi - lo));
            });
        nn::scale_grads(bg.grads, 1.0f / static_cast<float>(n));
        opt.step(model.params(), bg.grads);
    }
    // final reconstruction error
    nn::Bound bp = nn::bind(model.params(), false);
    double mse = 0.0;
    for (int i = 0; i < n; ++i) {
        nn::Var x = nn::leaf(tensors[static_cast<std::size_t>(i)]);
        auto enc = model.encode(bp, x);
        nn::Var rec = model.decode(bp, enc.features, model.zero_skips(1));
        nn::Var err = nn::mse_loss(rec, x);
        mse += err->value.data[0];
    }
    return mse / n;
}

}  // namespace spp::model

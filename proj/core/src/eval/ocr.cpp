#include "spp/eval/ocr.hpp"

#include <json.hpp>

#include <cmath>
#include <sstream>

#include "spp/nn/adam.hpp"
#include "spp/nn/conv.hpp"

namespace spp::eval {

namespace {

nn::Tensor crops_to_tensor(const std::vector<const img::Image*>& crops) {
    const int n = static_cast<int>(crops.size());
    const int h = crops[0]->h;
    const int w = crops[0]->w;
    nn::Tensor t({n, 3, h, w});
    for (int i = 0; i < n; ++i) {
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x < w; ++x) {
                const float* p = crops[static_cast<std::size_t>(i)]->px(y, x);
                for (int c = 0; c < 3; ++c) {
                    t.data[((static_cast<std::size_t>(i) * 3 + c) * h + y) * w + x] = p[c];
                }
            }
        }
    }
    return t;
}

void gaussian_blur(img::Image& im, float sigma) {
    if (sigma < 1e-3f) return;
    const int radius = 2;
    std::array<float, 2 * radius + 1> k{};
    float sum = 0.0f;
    for (int i = -radius; i <= radius; ++i) {
        k[static_cast<std::size_t>(i + radius)] =
            std::exp(-static_cast<float>(i * i) / (2.0f * sigma * sigma));
        sum += k[static_cast<std::size_t>(i + radius)];
    }
    for (float& v : k) v /= sum;
    img::Image tmp = im;
    for (int y = 0; y < im.h; ++y) {
        for (int x = 0; x < im.w; ++x) {
            float acc[3] = {0, 0, 0};
            for (int i = -radius; i <= radius; ++i) {
                const int sx = std::clamp(x + i, 0, im.w - 1);
                const float* p = im.px(y, sx);
                for (int c = 0; c < 3; ++c) acc[c] += k[static_cast<std::size_t>(i + radius)] * p[c];
            }
            float* o = tmp.px(y, x);
            for (int c = 0; c < 3; ++c) o[c] = acc[c];
        }
    }
    for (int y = 0; y < im.h; ++y) {
        for (int x = 0; x < im.w; ++x) {
            float acc[3] = {0, 0, 0};
            for (int i = -radius; i <= radius; ++i) {
                const int sy = std::clamp(y + i, 0, im.h - 1);
                const float* p = tmp.px(sy, x);
                for (int c = 0; c < 3; ++c) acc[c] += k[static_cast<std::size_t>(i + radius)] * p[c];
            }
            float* o = im.px(y, x);
            for (int c = 0; c < 3; ++c) o[c] = acc[c];
        }
    }
}

std::string format_confusion(const std::vector<int>& counts, int classes) {
    std::ostringstream out;
    for (int r = 0; r < classes; ++r) {
        for (int c = 0; c < classes; ++c) {
            if (c) out << ' ';
            out << counts[static_cast<std::size_t>(r) * classes + c];
        }
        out << '\n';
    }
    return out.str();
}

}  // namespace

OcrModel::OcrModel(const OcrConfig& cfg) : cfg_(cfg) {
    Rng rng(Rng::mix(cfg.seed, 0x6f6372ULL));
    auto head = [&](const std::string& prefix, int classes) {
        Head h;
        h.c1.w = params_.add(prefix + ".c1.w", nn::Tensor::randn({12, 3, 3, 3}, rng, 0.05f));
        h.c1.b = params_.add(prefix + ".c1.b", nn::Tensor::zeros({12}));
        h.c2.w = params_.add(prefix + ".c2.w", nn::Tensor::randn({24, 12, 3, 3}, rng, 0.05f));
        h.c2.b = params_.add(prefix + ".c2.b", nn::Tensor::zeros({24}));
        const int flat = 24 * (cfg_.crop / 4) * (cfg_.crop / 4);
        h.fc1 = nn::add_linear(params_, prefix + ".fc1", 64, flat, rng);
        h.fc2 = nn::add_linear(params_, prefix + ".fc2", classes, 64, rng);
        return h;
    };
    letter_ = head("letter", kLetterClasses);
    color_ = head("color", kColorClasses);
}

nn::Var OcrModel::head_logits(const nn::Bound& bp, const Head& head, const nn::Var& x) const {
    nn::Var h = nn::leaky_relu(nn::conv2d(x, bp[head.c1.w], bp[head.c1.b], 2, 1), 0.1f);
    h = nn::leaky_relu(nn::conv2d(h, bp[head.c2.w], bp[head.c2.b], 2, 1), 0.1f);
    const int n = h->value.dim(0);
    h = nn::reshape(h, {n, static_cast<int>(h->value.numel()) / n});
    h = nn::leaky_relu(nn::apply_linear(bp, head.fc1, h), 0.1f);
    return nn::apply_linear(bp, head.fc2, h);
}

std::vector<CellReading> OcrModel::classify_batch(const std::vector<img::Image>& crops) const {
    std::vector<const img::Image*> ptrs;
    for (const auto& c : crops) ptrs.push_back(&c);
    nn::Bound bp = nn::bind(params_, false);
    nn::Var x = nn::leaf(crops_to_tensor(ptrs));
    nn::Var ll = nn::softmax_rows(head_logits(bp, letter_, x));
    nn::Var cl = nn::softmax_rows(head_logits(bp, color_, x));
    std::vector<CellReading> out(crops.size());
    for (std::size_t i = 0; i < crops.size(); ++i) {
        const float* lrow = ll->value.ptr() + i * kLetterClasses;
        const float* crow = cl->value.ptr() + i * kColorClasses;
        CellReading r;
        r.letter_class = static_cast<int>(std::max_element(lrow, lrow + kLetterClasses) - lrow);
        r.letter_conf = lrow[r.letter_class];
        r.color_class = static_cast<int>(std::max_element(crow, crow + kColorClasses) - crow);
        r.color_conf = crow[r.color_class];
        out[i] = r;
    }
    return out;
}

CellReading OcrModel::classify(const img::Image& crop) const {
    return classify_batch({crop})[0];
}

void OcrModel::save(const std::string& path) const {
    nlohmann::ordered_json meta{{"format_version", kOcrFormatVersion},
                                {"kind", "ocr"},
                                {"crop", cfg_.crop},
                                {"letter_classes", kLetterClasses},
                                {"color_classes", kColorClasses},
                                {"class_order",
                                 {{"letters", "A..Z then empty"},
                                  {"colors", "red green blue yellow purple orange then none"}}},
                                {"seed", cfg_.seed}};
    nn::save_container(path, meta.dump(), params_);
}

OcrModel OcrModel::load(const std::string& path) {
    nn::Container c = nn::load_container(path);
    nlohmann::json meta = nlohmann::json::parse(c.meta_json);
    if (meta.at("format_version").get<int>() != kOcrFormatVersion ||
        meta.at("kind").get<std::string>() != "ocr") {
        throw VersionMismatch(path + " is not an OCR checkpoint");
    }
    OcrConfig cfg;
    cfg.crop = meta.at("crop").get<int>();
    cfg.seed = meta.at("seed").get<std::uint64_t>();
    OcrModel model(cfg);
    for (std::size_t i = 0; i < model.params_.count(); ++i) {
        const int j = c.params.find(model.params_.names[i]);
        if (j < 0) throw CorruptDataset("ocr checkpoint missing " + model.params_.names[i]);
        model.params_.at(static_cast<int>(i)) = c.params.at(j);
    }
    return model;
}

CellSample make_cell_sample(int letter_class, int color_class, Rng& rng, const OcrConfig& cfg,
                            bool clean) {
    // Render one board cell at native geometry, then resize to the
    // classifier input.
    const datagen::RenderConfig& rc = cfg.render;
    const float scale = static_cast<float>(rc.resolution) / 64.0f;
    const int cell_px = std::max(4, static_cast<int>(std::round(12.0f * scale)));
    img::Image cell(cell_px, cell_px);
    cell.fill(rc.board_fill[0], rc.board_fill[1], rc.board_fill[2]);
    if (letter_class != kEmptyLetter) {
        float cx = cell_px * 0.5f;
        float cy = cell_px * 0.5f;
        float size = rc.board_glyph * scale;
        float angle = 0.0f;
        if (!clean) {
            cx += static_cast<float>(rng.uniform(-1.5, 1.5)) * scale;
            cy += static_cast<float>(rng.uniform(-1.5, 1.5)) * scale;
            size *= static_cast<float>(rng.uniform(0.88, 1.12));
            angle = static_cast<float>(rng.uniform(-0.08, 0.08));
        }
        datagen::draw_glyph(cell, static_cast<core::Letter>(letter_class),
                            core::rgb(static_cast<core::Color>(color_class)), cx, cy, size,
                            angle, rc.supersample);
    }
    img::Image crop = img::resize_bilinear(cell, cfg.crop, cfg.crop);
    if (!clean) {
        gaussian_blur(crop, static_cast<float>(rng.uniform(0.0, 0.9)));
        const float gain = static_cast<float>(rng.uniform(-0.06, 0.06));
        const float noise = static_cast<float>(rng.uniform(0.0, 0.035));
        for (float& v : crop.data) v += gain + noise * rng.normal_f();
        crop.clamp01();
    }
    CellSample s;
    s.crop = std::move(crop);
    s.letter_class = letter_class;
    s.color_class = letter_class == kEmptyLetter ? kNoneColor : color_class;
    return s;
}

std::pair<OcrModel, OcrTrainStats> train_ocr(const OcrConfig& cfg, int workers) {
    if (cfg.n_train <= 0 || cfg.epochs <= 0 || cfg.lr <= 0.0f) {
        throw ConfigError("train_ocr: degenerate hyperparameters");
    }
    OcrModel model(cfg);
    Rng rng(Rng::mix(cfg.seed, 0x636f7270ULL));

    auto sample_classes = [&](Rng& r) {
        // 1-in-8 empties; otherwise a uniform letter/color pair.
        if (r.uniform_int(8) == 0) return std::pair<int, int>{kEmptyLetter, kNoneColor};
        return std::pair<int, int>{static_cast<int>(r.uniform_int(core::kNumLetters)),
                                   static_cast<int>(r.uniform_int(core::kNumColors))};
    };

    std::vector<CellSample> train;
    train.reserve(static_cast<std::size_t>(cfg.n_train));
    for (int i = 0; i < cfg.n_train; ++i) {
        const auto [l, c] = sample_classes(rng);
        train.push_back(make_cell_sample(l, c, rng, cfg, false));
    }
    Rng heldout_rng(Rng::mix(cfg.seed, 0x68656c64ULL));
    std::vector<CellSample> heldout;
    for (int i = 0; i < cfg.n_heldout; ++i) {
        const auto [l, c] = sample_classes(heldout_rng);
        heldout.push_back(make_cell_sample(l, c, heldout_rng, cfg, true));
    }

    nn::Adam opt(cfg.lr);
    std::vector<int> order(train.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        rng.shuffle(order);
        for (std::size_t start = 0; start < order.size();
             start += static_cast<std::size_t>(cfg.batch)) {
            const int n = static_cast<int>(std::min<std::size_t>(cfg.batch,
                                                                 order.size() - start));
            auto bg = nn::compute_grads(
                model.params(), n, workers, [&](const nn::Bound& bp, int lo, int hi) {
                    std::vector<const img::Image*> crops;
                    std::vector<int> lt, ct;
                    for (int i = lo; i < hi; ++i) {
                        const CellSample& s = train[static_cast<std::size_t>(
                            order[start + static_cast<std::size_t>(i)])];
                        crops.push_back(&s.crop);
                        lt.push_back(s.letter_class);
                        ct.push_back(s.color_class);
                    }
                    nn::Var x = nn::leaf(crops_to_tensor(crops));
                    std::vector<float> w(crops.size(), 1.0f);
                    nn::Var loss = nn::add(
                        nn::cross_entropy_logits(model.head_logits(bp, model.letter_head(), x), lt, w),
                        nn::cross_entropy_logits(model.head_logits(bp, model.color_head(), x), ct, w));
                    return nn::scale(loss, static_cast<float>(hi - lo));
                });
            nn::scale_grads(bg.grads, 1.0f / static_cast<float>(n));
            opt.step(model.params(), bg.grads);
        }
    }

    OcrTrainStats stats;
    std::vector<img::Image> crops;
    for (const CellSample& s : heldout) crops.push_back(s.crop);
    const auto readings = model.classify_batch(crops);
    std::vector<int> lconf(kLetterClasses * kLetterClasses, 0);
    std::vector<int> cconf(kColorClasses * kColorClasses, 0);
    int lok = 0, cok = 0;
    for (std::size_t i = 0; i < heldout.size(); ++i) {
        lconf[static_cast<std::size_t>(heldout[i].letter_class) * kLetterClasses +
              readings[i].letter_class]++;
        cconf[static_cast<std::size_t>(heldout[i].color_class) * kColorClasses +
              readings[i].color_class]++;
        if (readings[i].letter_class == heldout[i].letter_class) ++lok;
        if (readings[i].color_class == heldout[i].color_class) ++cok;
    }
    stats.letter_accuracy = static_cast<double>(lok) / heldout.size();
    stats.color_accuracy = static_cast<double>(cok) / heldout.size();
    stats.letter_confusion = format_confusion(lconf, kLetterClasses);
    stats.color_confusion = format_confusion(cconf, kColorClasses);
    if (stats.letter_accuracy < 0.99 || stats.color_accuracy < 0.99) {
        throw GateFailure("OCR accuracy gate failed (letter " +
                          std::to_string(stats.letter_accuracy) + ", color " +
                          std::to_string(stats.color_accuracy) + ")\nletter confusion:\n" +
                          stats.letter_confusion + "color confusion:\n" + stats.color_confusion);
    }
    return {std::move(model), std::move(stats)};
}

std::vector<CellReading> read_board(const img::Image& frame, const core::BoardPose& pose,
                                    const OcrModel& ocr) {
    const float scale = static_cast<float>(frame.h) / 64.0f;
    const int side = std::max(2, static_cast<int>(std::round(pose.cell_size * scale)));
    std::vector<img::Image> crops;
    for (int i = 0; i < core::kNumQuarters; ++i) {
        const float cx = pose.cell_cx(i) * scale;
        const float cy = pose.cell_cy(i) * scale;
        const int x0 = static_cast<int>(std::round(cx - side * 0.5f));
        const int y0 = static_cast<int>(std::round(cy - side * 0.5f));
        if (x0 < 0 || y0 < 0 || x0 + side > frame.w || y0 + side > frame.h) {
            throw PoseOutOfFrame("board cell " + std::to_string(i) + " leaves the frame");
        }
        crops.push_back(img::resize_bilinear(img::crop(frame, y0, x0, side, side),
                                             ocr.config().crop, ocr.config().crop));
    }
    return ocr.classify_batch(crops);
}

}  // namespace spp::eval

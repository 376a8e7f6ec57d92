#include "spp/datagen/dataset_io.hpp"

#include <json.hpp>

#include <atomic>
#include <filesystem>
#include <fstream>
#include <thread>

#include "spp/common/rng.hpp"
#include "spp/core/grammar.hpp"
#include "spp/core/transition.hpp"
#include "spp/image/png_io.hpp"

namespace spp::datagen {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

json tile_to_json(const core::Tile& t) {
    return json{{"letter", std::string(1, core::to_char(t.letter))},
                {"color", core::to_string(t.color)},
                {"x", t.x},
                {"y", t.y},
                {"angle", t.angle}};
}

core::Tile tile_from_json(const json& j) {
    core::Tile t;
    t.letter = *core::letter_from_char(j.at("letter").get<std::string>().at(0));
    t.color = *core::color_from_string(j.at("color").get<std::string>());
    t.x = j.at("x").get<float>();
    t.y = j.at("y").get<float>();
    t.angle = j.at("angle").get<float>();
    return t;
}

json state_to_json(const core::SymbolicState& st) {
    json cells = json::array();
    for (const auto& c : st.cells) {
        if (c) {
            cells.push_back(json{{"color", core::to_string(c->color)},
                                 {"letter", std::string(1, core::to_char(c->letter))}});
        } else {
            cells.push_back(nullptr);
        }
    }
    json staging = json::array();
    for (const core::Tile& t : st.staging) staging.push_back(tile_to_json(t));
    return json{{"cells", cells}, {"staging", staging}};
}

core::SymbolicState state_from_json(const json& j, const core::BoardPose& pose) {
    core::SymbolicState st;
    st.board_pose = pose;
    const json& cells = j.at("cells");
    for (int i = 0; i < core::kNumQuarters; ++i) {
        if (!cells.at(i).is_null()) {
            st.cells[i] = core::ObjectRef{
                *core::color_from_string(cells.at(i).at("color").get<std::string>()),
                *core::letter_from_char(cells.at(i).at("letter").get<std::string>().at(0))};
        }
    }
    for (const json& t : j.at("staging")) st.staging.push_back(tile_from_json(t));
    return st;
}

std::string labels_json(const Demonstration& d) {
    json j{{"high_level", d.high_level},
           {"low_level", d.low_level},
           {"word", d.scene.word},
           {"seed", d.scene.seed}};
    return j.dump(2) + "\n";
}

std::string scene_json(const Demonstration& d) {
    const core::BoardPose& p = d.scene.state0.board_pose;
    json states = json::array();
    for (const auto& st : d.states) states.push_back(state_to_json(st));
    json j{{"board_pose", json{{"cx", p.cx}, {"cy", p.cy}, {"cell_size", p.cell_size}}},
           {"tiles", json::array()},
           {"word", d.scene.word},
           {"seed", d.scene.seed},
           {"states", states}};
    for (const core::Tile& t : d.scene.state0.staging) j["tiles"].push_back(tile_to_json(t));
    return j.dump(2) + "\n";
}

std::string letters_str(const std::vector<core::Letter>& ls) {
    std::string s;
    for (core::Letter l : ls) s.push_back(core::to_char(l));
    return s;
}

std::vector<core::Letter> letters_from_str(const std::string& s) {
    std::vector<core::Letter> out;
    for (char c : s) out.push_back(*core::letter_from_char(c));
    return out;
}

std::string write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + path);
    out << text;
    return path;
}

std::string video_id(std::size_t index) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%06zu", index);
    return buf;
}

}  // namespace

Demonstration Dataset::load(std::size_t index) const {
    const VideoRecord& rec = manifest.videos.at(index);
    const fs::path dir = fs::path(root) / "videos" / rec.id;

    Demonstration d;
    json labels = json::parse(std::ifstream(dir / "labels.json"));
    d.high_level = labels.at("high_level").get<std::string>();
    d.low_level = labels.at("low_level").get<std::vector<std::string>>();

    json scene = json::parse(std::ifstream(dir / "scene.json"));
    const json& pj = scene.at("board_pose");
    core::BoardPose pose{pj.at("cx").get<float>(), pj.at("cy").get<float>(),
                         pj.at("cell_size").get<float>()};
    d.scene.word = scene.at("word").get<std::string>();
    d.scene.seed = scene.at("seed").get<std::uint64_t>();
    d.scene.state0.board_pose = pose;
    for (const json& t : scene.at("tiles")) d.scene.state0.staging.push_back(tile_from_json(t));
    for (const json& st : scene.at("states")) d.states.push_back(state_from_json(st, pose));

    for (int t = 0; t < 5; ++t) {
        d.frames.push_back(img::read_png((dir / ("frame_" + std::to_string(t) + ".png")).string()));
    }
    return d;
}

std::vector<std::size_t> Dataset::indices_for_split(const std::string& split) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < manifest.videos.size(); ++i) {
        if (manifest.videos[i].split == split) out.push_back(i);
    }
    return out;
}

Dataset write_dataset(const std::string& root,
                      const std::vector<std::pair<Demonstration, std::string>>& demos,
                      const SplitManifest& split, const std::string& config_echo) {
    fs::create_directories(fs::path(root) / "videos");

    DatasetManifest manifest;
    manifest.config_echo = config_echo;
    manifest.split = split;

    for (std::size_t i = 0; i < demos.size(); ++i) {
        const Demonstration& d = demos[i].first;
        VideoRecord rec;
        rec.id = video_id(i);
        rec.word = d.scene.word;
        rec.seed = d.scene.seed;
        rec.split = demos[i].second;
        const fs::path dir = fs::path(root) / "videos" / rec.id;
        fs::create_directories(dir);
        for (int t = 0; t < static_cast<int>(d.frames.size()); ++t) {
            const std::string name = "frame_" + std::to_string(t) + ".png";
            const auto bytes = img::encode_png(d.frames[t]);
            img::write_file_bytes((dir / name).string(), bytes);
            rec.checksums.emplace_back(name, img::crc32_of(bytes));
        }
        for (const auto& [name, text] :
             {std::pair<std::string, std::string>{"labels.json", labels_json(d)},
              std::pair<std::string, std::string>{"scene.json", scene_json(d)}}) {
            write_text((dir / name).string(), text);
            rec.checksums.emplace_back(
                name, img::crc32_of(std::vector<std::uint8_t>(text.begin(), text.end())));
        }
        manifest.videos.push_back(std::move(rec));
    }

    json j{{"format_version", manifest.format_version},
           {"config", config_echo.empty() ? json::object() : json::parse(config_echo)},
           {"split",
            json{{"name", split.name},
                 {"train_words", split.train_words},
                 {"test_words", split.test_words},
                 {"unseen_letters", letters_str(split.unseen_letters)},
                 {"counts", json{{"train_words", split.train_words.size()},
                                 {"test_words", split.test_words.size()}}}}},
           {"videos", json::array()}};
    for (const VideoRecord& rec : manifest.videos) {
        json cj = json::object();
        for (const auto& [name, crc] : rec.checksums) cj[name] = crc;
        j["videos"].push_back(json{{"id", rec.id},
                                   {"word", rec.word},
                                   {"seed", rec.seed},
                                   {"split", rec.split},
                                   {"checksums", cj}});
    }
    write_text((fs::path(root) / "manifest.json").string(), j.dump(2) + "\n");

    Dataset ds;
    ds.root = root;
    ds.manifest = std::move(manifest);
    return ds;
}

Dataset read_dataset(const std::string& root, double replay_fraction) {
    const fs::path manifest_path = fs::path(root) / "manifest.json";
    std::ifstream in(manifest_path);
    if (!in) throw ArtifactMissing("no manifest at " + manifest_path.string());
    json j = json::parse(in);
    if (j.at("format_version").get<int>() != kDatasetFormatVersion) {
        throw VersionMismatch("dataset format_version " +
                              j.at("format_version").dump() + " != " +
                              std::to_string(kDatasetFormatVersion));
    }

    Dataset ds;
    ds.root = root;
    ds.manifest.config_echo = j.at("config").dump();
    const json& sj = j.at("split");
    ds.manifest.split.name = sj.at("name").get<std::string>();
    ds.manifest.split.train_words = sj.at("train_words").get<std::vector<std::string>>();
    ds.manifest.split.test_words = sj.at("test_words").get<std::vector<std::string>>();
    ds.manifest.split.unseen_letters =
        letters_from_str(sj.at("unseen_letters").get<std::string>());
    for (const json& vj : j.at("videos")) {
        VideoRecord rec;
        rec.id = vj.at("id").get<std::string>();
        rec.word = vj.at("word").get<std::string>();
        rec.seed = vj.at("seed").get<std::uint64_t>();
        rec.split = vj.at("split").get<std::string>();
        for (const auto& [name, crc] : vj.at("checksums").items()) {
            rec.checksums.emplace_back(name, crc.get<std::uint32_t>());
        }
        ds.manifest.videos.push_back(std::move(rec));
    }

    // Checksum pass over every file.
    for (const VideoRecord& rec : ds.manifest.videos) {
        const fs::path dir = fs::path(root) / "videos" / rec.id;
        for (const auto& [name, crc] : rec.checksums) {
            const fs::path p = dir / name;
            if (!fs::exists(p)) {
                throw CorruptDataset("video " + rec.id + ": missing file " + name);
            }
            if (img::crc32_of_file(p.string()) != crc) {
                throw CorruptDataset("video " + rec.id + ": checksum mismatch on " + name);
            }
        }
    }

    // Replay oracle on an evenly spaced sample.
    if (replay_fraction > 0.0 && !ds.manifest.videos.empty()) {
        const auto n = ds.manifest.videos.size();
        const auto k = std::min<std::size_t>(
            n, static_cast<std::size_t>(std::ceil(replay_fraction * static_cast<double>(n))));
        json config = json::parse(ds.manifest.config_echo.empty() ? std::string("{}")
                                                                  : ds.manifest.config_echo);
        RenderConfig rc;
        if (config.contains("dataset") && config["dataset"].contains("resolution")) {
            rc.resolution = config["dataset"]["resolution"].get<int>();
        }
        for (std::size_t s = 0; s < k; ++s) {
            const std::size_t i = s * n / k;
            const VideoRecord& rec = ds.manifest.videos[i];
            Demonstration d = ds.load(i);
            core::SymbolicState st = d.scene.state0;
            for (int t = 0; t < 4; ++t) {
                if (!(st == d.states[t])) {
                    throw CorruptDataset("video " + rec.id + ": stored state " +
                                         std::to_string(t) + " diverges from label replay");
                }
                st = core::apply_instruction(st, core::parse_instruction(d.low_level[t]));
            }
            if (core::spelled_word(st).value_or("") != d.scene.word) {
                throw CorruptDataset("video " + rec.id + ": replay does not spell the word");
            }
            for (int t = 0; t < 5; ++t) {
                const img::Image re = render_frame(d.states[t], rc);
                const auto want = img::read_file_bytes(
                    (fs::path(root) / "videos" / rec.id / ("frame_" + std::to_string(t) + ".png"))
                        .string());
                if (img::encode_png(re) != want) {
                    throw CorruptDataset("video " + rec.id + ": frame " + std::to_string(t) +
                                         " does not match its re-render");
                }
            }
        }
    }
    return ds;
}

Dataset generate_dataset(const std::string& root, const SplitManifest& split,
                         const DatagenConfig& cfg, std::uint64_t seed,
                         const std::string& config_echo, int workers) {
    struct Job {
        std::string word;
        std::uint64_t seed;
        std::string split;
    };
    std::vector<Job> jobs;
    DatagenConfig train_cfg = cfg;
    // Keep unseen glyphs out of training scenes entirely.
    for (core::Letter l : split.unseen_letters) train_cfg.distractor_exclude.push_back(l);
    for (const std::string& w : split.train_words) {
        for (int v = 0; v < cfg.videos_per_word; ++v) {
            jobs.push_back({w, Rng::mix(seed, static_cast<std::uint64_t>(v)), "train"});
        }
    }
    for (const std::string& w : split.test_words) {
        for (int v = 0; v < cfg.videos_per_word; ++v) {
            jobs.push_back({w, Rng::mix(seed, static_cast<std::uint64_t>(v)), "test"});
        }
    }

    std::vector<std::pair<Demonstration, std::string>> demos(jobs.size());
    const int nw = std::max(1, workers);
    std::vector<std::thread> pool;
    std::atomic<std::size_t> next{0};
    auto run = [&] {
        for (std::size_t i = next.fetch_add(1); i < jobs.size(); i = next.fetch_add(1)) {
            const DatagenConfig& c = jobs[i].split == "train" ? train_cfg : cfg;
            demos[i] = {generate_demonstration(jobs[i].word, jobs[i].seed, c), jobs[i].split};
        }
    };
    if (nw == 1) {
        run();
    } else {
        for (int w = 0; w < nw; ++w) pool.emplace_back(run);
        for (auto& t : pool) t.join();
    }
    return write_dataset(root, demos, split, config_echo);
}

}  // namespace spp::datagen

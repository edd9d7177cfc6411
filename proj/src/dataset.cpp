#include "cosci/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "cosci/errors.hpp"
#include "cosci/rng.hpp"

namespace cosci {

MTSDataset::MTSDataset(std::size_t n_instances, std::size_t n_channels, std::size_t length)
    : n_instances_(n_instances), n_channels_(n_channels), length_(length),
      values_(n_instances * n_channels * length, 0.0) {}

void MTSDataset::set_labels(std::vector<int> labels) {
    if (labels.size() != n_instances_)
        throw ShapeError("labels count " + std::to_string(labels.size()) +
                         " does not match instance count " + std::to_string(n_instances_));
    for (int v : labels)
        if (v != 0 && v != 1) throw DataError("labels must be 0 or 1");
    labels_ = std::move(labels);
}

void MTSDataset::validate() const {
    if (n_instances_ < 1 || n_channels_ < 1 || length_ < 2)
        throw ShapeError("dataset shape must satisfy N>=1, C>=1, L>=2; got N=" +
                         std::to_string(n_instances_) + " C=" + std::to_string(n_channels_) +
                         " L=" + std::to_string(length_));
    if (values_.size() != n_instances_ * n_channels_ * length_)
        throw ShapeError("value buffer size does not match dataset shape");
    for (double v : values_)
        if (!std::isfinite(v)) throw DataError("dataset contains a non-finite value");
    if (labels_) {
        if (labels_->size() != n_instances_) throw ShapeError("label count mismatch");
        for (int v : *labels_)
            if (v != 0 && v != 1) throw DataError("labels must be 0 or 1");
    }
}

MTSDataset MTSDataset::select_channels(const std::vector<std::size_t>& channels) const {
    if (channels.empty()) throw ShapeError("select_channels: empty channel list");
    for (std::size_t c : channels)
        if (c >= n_channels_) throw ShapeError("select_channels: channel index out of range");
    MTSDataset out(n_instances_, channels.size(), length_);
    for (std::size_t i = 0; i < n_instances_; ++i)
        for (std::size_t k = 0; k < channels.size(); ++k) {
            auto src = series(i, channels[k]);
            std::copy(src.begin(), src.end(), out.series(i, k).begin());
        }
    if (labels_) out.labels_ = labels_;
    return out;
}

MTSDataset MTSDataset::select_instances(const std::vector<std::size_t>& instances) const {
    if (instances.empty()) throw ShapeError("select_instances: empty instance list");
    MTSDataset out(instances.size(), n_channels_, length_);
    std::vector<int> labels;
    for (std::size_t k = 0; k < instances.size(); ++k) {
        std::size_t i = instances[k];
        if (i >= n_instances_) throw ShapeError("select_instances: index out of range");
        auto src = instance_row(i);
        std::copy(src.begin(), src.end(),
                  out.values_.begin() + static_cast<std::ptrdiff_t>(k * n_channels_ * length_));
        if (labels_) labels.push_back((*labels_)[i]);
    }
    if (labels_) out.labels_ = std::move(labels);
    return out;
}

MTSDataset MTSDataset::concatenate(const MTSDataset& a, const MTSDataset& b) {
    if (a.n_channels_ != b.n_channels_ || a.length_ != b.length_)
        throw ShapeError("concatenate: channel count or length mismatch");
    if (a.labeled() != b.labeled())
        throw ShapeError("concatenate: one dataset is labeled, the other is not");
    MTSDataset out(a.n_instances_ + b.n_instances_, a.n_channels_, a.length_);
    std::copy(a.values_.begin(), a.values_.end(), out.values_.begin());
    std::copy(b.values_.begin(), b.values_.end(),
              out.values_.begin() + static_cast<std::ptrdiff_t>(a.values_.size()));
    if (a.labeled()) {
        std::vector<int> labels = a.labels();
        labels.insert(labels.end(), b.labels().begin(), b.labels().end());
        out.labels_ = std::move(labels);
    }
    return out;
}

// ---------------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------------

namespace {

constexpr const char* kHeaderPrefix = "cosci-mts v1;";

struct HeaderInfo {
    std::size_t channels = 0;
    std::size_t length = 0;
    bool labeled = false;
};

// Parses "cosci-mts v1; channels=C; length=L; labeled={0,1}".
HeaderInfo parse_header(const std::string& line) {
    HeaderInfo info;
    std::string rest = line.substr(std::string(kHeaderPrefix).size());
    std::istringstream ss(rest);
    std::string field;
    int seen = 0;
    while (std::getline(ss, field, ';')) {
        auto eq = field.find('=');
        if (eq == std::string::npos) throw ParseError("malformed dataset header: " + line);
        std::string key = field.substr(0, eq);
        key.erase(0, key.find_first_not_of(' '));
        key.erase(key.find_last_not_of(' ') + 1);
        unsigned long long value = 0;
        try {
            value = std::stoull(field.substr(eq + 1));
        } catch (const std::exception&) {
            throw ParseError("malformed dataset header value: " + field);
        }
        if (key == "channels") info.channels = value;
        else if (key == "length") info.length = value;
        else if (key == "labeled") info.labeled = value != 0;
        else throw ParseError("unknown dataset header key: " + key);
        ++seen;
    }
    if (seen != 3) throw ParseError("dataset header must carry channels, length and labeled");
    return info;
}

double parse_field(std::string_view field, std::size_t row, std::size_t col) {
    // trim spaces and a trailing CR
    while (!field.empty() && (field.front() == ' ' || field.front() == '\t')) field.remove_prefix(1);
    while (!field.empty() &&
           (field.back() == ' ' || field.back() == '\t' || field.back() == '\r'))
        field.remove_suffix(1);
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc() || ptr != field.data() + field.size())
        throw ParseError("row " + std::to_string(row) + ", column " + std::to_string(col) +
                         ": cannot parse '" + std::string(field) + "' as a number");
    if (std::isnan(value))
        throw DataError("row " + std::to_string(row) + ", column " + std::to_string(col) +
                        ": NaN field");
    if (std::isinf(value))
        throw DataError("row " + std::to_string(row) + ", column " + std::to_string(col) +
                        ": non-finite field");
    return value;
}

} // namespace

MTSDataset load_csv(const std::string& path, std::size_t n_channels, std::size_t length) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);

    std::string line;
    bool labeled = false;
    bool have_line = static_cast<bool>(std::getline(in, line));
    if (have_line && line.rfind(kHeaderPrefix, 0) == 0) {
        HeaderInfo info = parse_header(line);
        if (info.channels != n_channels || info.length != length)
            throw ShapeError("header declares " + std::to_string(info.channels) + "x" +
                             std::to_string(info.length) + " but caller requested " +
                             std::to_string(n_channels) + "x" + std::to_string(length));
        labeled = info.labeled;
        have_line = static_cast<bool>(std::getline(in, line));
    }

    const std::size_t n_fields = n_channels * length + (labeled ? 1 : 0);
    std::vector<double> values;
    std::vector<int> labels;
    std::size_t row = 0;
    while (have_line) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty()) {
            std::size_t count = 0;
            std::size_t pos = 0;
            while (true) {
                std::size_t comma = line.find(',', pos);
                std::string_view field(line.data() + pos,
                                       (comma == std::string::npos ? line.size() : comma) - pos);
                if (count >= n_fields)
                    throw ShapeError("row " + std::to_string(row) + " has more than " +
                                     std::to_string(n_fields) + " fields");
                double v = parse_field(field, row, count);
                if (labeled && count == n_fields - 1) {
                    if (v != 0.0 && v != 1.0)
                        throw DataError("row " + std::to_string(row) + ": label must be 0 or 1");
                    labels.push_back(static_cast<int>(v));
                } else {
                    values.push_back(v);
                }
                ++count;
                if (comma == std::string::npos) break;
                pos = comma + 1;
            }
            if (count != n_fields)
                throw ShapeError("row " + std::to_string(row) + " has " + std::to_string(count) +
                                 " fields, expected " + std::to_string(n_fields));
            ++row;
        }
        have_line = static_cast<bool>(std::getline(in, line));
    }

    if (row == 0) throw ShapeError("empty dataset file: " + path);

    MTSDataset out(row, n_channels, length);
    out.values() = std::move(values);
    if (labeled) out.set_labels(std::move(labels));
    out.validate();
    return out;
}

MTSDataset load_csv_auto(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    std::string line;
    if (!std::getline(in, line) || line.rfind(kHeaderPrefix, 0) != 0)
        throw ParseError(path + " has no shape header; pass channels and length explicitly");
    const HeaderInfo info = parse_header(line);
    return load_csv(path, info.channels, info.length);
}

std::string to_csv_string(const MTSDataset& dataset) {
    dataset.validate();
    std::string out;
    out.reserve(dataset.values().size() * 12);
    out += kHeaderPrefix;
    out += " channels=" + std::to_string(dataset.n_channels()) +
           "; length=" + std::to_string(dataset.length()) +
           "; labeled=" + (dataset.labeled() ? std::string("1") : std::string("0")) + "\n";

    char buf[40];
    for (std::size_t i = 0; i < dataset.n_instances(); ++i) {
        auto row = dataset.instance_row(i);
        for (std::size_t k = 0; k < row.size(); ++k) {
            std::snprintf(buf, sizeof buf, "%.17g", row[k]);
            if (k) out += ',';
            out += buf;
        }
        if (dataset.labeled()) {
            out += ',';
            out += std::to_string(dataset.label(i));
        }
        out += '\n';
    }
    return out;
}

void save_csv(const MTSDataset& dataset, const std::string& path) {
    const std::string body = to_csv_string(dataset);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path + " for writing");
    out << body;
    if (!out) throw IoError("write failure on " + path);
}

// ---------------------------------------------------------------------------
// Preprocessing
// ---------------------------------------------------------------------------

MTSDataset zscore_filter(const MTSDataset& dataset, double threshold) {
    dataset.validate();
    if (!(threshold > 0.0)) throw ConfigError("zscore threshold must be > 0");

    MTSDataset out = dataset;
    const std::size_t n = dataset.n_instances();
    const std::size_t len = dataset.length();

    for (std::size_t c = 0; c < dataset.n_channels(); ++c) {
        double sum = 0.0, sq = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (double v : dataset.series(i, c)) {
                sum += v;
                sq += v * v;
            }
        const double count = static_cast<double>(n * len);
        const double mean = sum / count;
        const double var = std::max(0.0, sq / count - mean * mean);
        const double sd = std::sqrt(var);
        if (sd == 0.0) continue; // constant channel passes through

        for (std::size_t i = 0; i < n; ++i) {
            auto src = dataset.series(i, c);
            auto dst = out.series(i, c);
            std::vector<bool> flagged(len, false);
            bool any = false, all = true;
            for (std::size_t t = 0; t < len; ++t) {
                flagged[t] = std::abs(src[t] - mean) / sd > threshold;
                any = any || flagged[t];
                all = all && flagged[t];
            }
            if (!any || all) continue; // nothing to fix, or no anchor to fix from
            // linear interpolation between nearest valid neighbours
            std::size_t t = 0;
            while (t < len) {
                if (!flagged[t]) {
                    ++t;
                    continue;
                }
                std::size_t run_end = t;
                while (run_end < len && flagged[run_end]) ++run_end;
                const bool has_left = t > 0;
                const bool has_right = run_end < len;
                if (has_left && has_right) {
                    const double left = src[t - 1];
                    const double right = src[run_end];
                    const double gap = static_cast<double>(run_end - (t - 1));
                    for (std::size_t u = t; u < run_end; ++u)
                        dst[u] = left + (right - left) * static_cast<double>(u - (t - 1)) / gap;
                } else {
                    const double anchor = has_left ? src[t - 1] : src[run_end];
                    for (std::size_t u = t; u < run_end; ++u) dst[u] = anchor;
                }
                t = run_end;
            }
        }
    }
    return out;
}

MTSDataset extract_event_windows(const MTSDataset& dataset, const std::vector<Event>& events,
                                 std::size_t window, std::size_t margin) {
    dataset.validate();
    if (window < 2) throw ConfigError("window must be >= 2");
    const std::size_t len = dataset.length();
    if (window > len) throw ConfigError("window longer than the series");

    for (const Event& e : events) {
        if (e.instance >= dataset.n_instances() || e.start >= e.end || e.end > len)
            throw DataError("event out of bounds");
    }

    // Positive frames: pad the event by `margin` on each side, centre the
    // padded span in the window, clamp to the series. Events whose padded
    // span cannot fit are skipped (counts are rebalanced below).
    struct Frame {
        std::size_t instance;
        std::size_t start;
    };
    std::vector<Frame> positives;
    for (const Event& e : events) {
        const std::size_t span_start = e.start >= margin ? e.start - margin : 0;
        const std::size_t span_end = std::min(e.end + margin, len);
        if (e.start < margin || e.end + margin > len) continue;  // padding does not fit
        if (span_end - span_start > window) continue;            // window too small
        const std::size_t centre = (span_start + span_end) / 2;
        std::size_t start = centre >= window / 2 ? centre - window / 2 : 0;
        start = std::min(start, len - window);
        if (start > span_start) start = span_start;
        if (start + window < span_end) start = span_end - window;
        positives.push_back({e.instance, start});
    }

    // Negative frames: left-to-right scan of non-overlapping windows that keep
    // `margin` clearance from every event of the same instance.
    std::vector<Frame> negatives;
    for (std::size_t i = 0; i < dataset.n_instances() && negatives.size() < positives.size();
         ++i) {
        std::vector<std::pair<std::size_t, std::size_t>> forbidden;
        for (const Event& e : events)
            if (e.instance == i)
                forbidden.emplace_back(e.start >= margin ? e.start - margin : 0,
                                       std::min(e.end + margin, len));
        for (std::size_t start = 0; start + window <= len && negatives.size() < positives.size();) {
            bool clear = true;
            std::size_t skip_to = start + window;
            for (auto [fs, fe] : forbidden) {
                if (start < fe && fs < start + window) {
                    clear = false;
                    skip_to = std::max(skip_to, fe);
                    break;
                }
            }
            if (clear) {
                negatives.push_back({i, start});
                start += window;
            } else {
                start = skip_to;
            }
        }
    }

    if (positives.empty()) throw DataError("no event frames could be extracted");
    // balance by truncating the larger class; when no negative span exists at
    // all, the positive frames are still returned
    if (!negatives.empty()) {
        const std::size_t per_class = std::min(positives.size(), negatives.size());
        positives.resize(per_class);
        negatives.resize(per_class);
    }

    MTSDataset out(positives.size() + negatives.size(), dataset.n_channels(), window);
    std::vector<int> labels(positives.size() + negatives.size(), 0);
    for (std::size_t k = 0; k < positives.size(); ++k) labels[k] = 1;
    auto copy_frame = [&](std::size_t dst_idx, const Frame& f) {
        for (std::size_t c = 0; c < dataset.n_channels(); ++c) {
            auto src = dataset.series(f.instance, c);
            std::copy(src.begin() + static_cast<std::ptrdiff_t>(f.start),
                      src.begin() + static_cast<std::ptrdiff_t>(f.start + window),
                      out.series(dst_idx, c).begin());
        }
    };
    for (std::size_t k = 0; k < positives.size(); ++k) copy_frame(k, positives[k]);
    for (std::size_t k = 0; k < negatives.size(); ++k)
        copy_frame(positives.size() + k, negatives[k]);
    out.set_labels(std::move(labels));
    return out;
}

std::vector<std::size_t> forward_select_channels(const MTSDataset& dataset, std::size_t k,
                                                 const ChannelSubsetScorer& scorer) {
    dataset.validate();
    if (k < 1 || k > dataset.n_channels())
        throw ConfigError("forward selection requires 1 <= k <= n_channels");

    std::vector<std::size_t> selected;
    std::vector<bool> used(dataset.n_channels(), false);
    for (std::size_t step = 0; step < k; ++step) {
        double best_score = -std::numeric_limits<double>::infinity();
        std::size_t best_channel = 0;
        for (std::size_t c = 0; c < dataset.n_channels(); ++c) {
            if (used[c]) continue;
            std::vector<std::size_t> candidate = selected;
            candidate.push_back(c);
            const double score = scorer(dataset, candidate);
            if (score > best_score) { // strict: ties keep the lowest index
                best_score = score;
                best_channel = c;
            }
        }
        used[best_channel] = true;
        selected.push_back(best_channel);
    }
    return selected;
}

std::pair<std::vector<std::size_t>, std::vector<std::size_t>>
split_indices(const MTSDataset& dataset, const SplitSpec& spec) {
    dataset.validate();
    if (!(spec.train_fraction > 0.0 && spec.train_fraction < 1.0))
        throw ConfigError("train_fraction must lie in (0,1)");

    Rng rng(derive_seed(spec.seed, "split"));
    std::vector<std::size_t> train, test;

    auto split_group = [&](std::vector<std::size_t>& group) {
        rng.shuffle(group);
        const std::size_t n_train =
            static_cast<std::size_t>(std::floor(spec.train_fraction * double(group.size()) + 0.5));
        for (std::size_t j = 0; j < group.size(); ++j)
            (j < n_train ? train : test).push_back(group[j]);
    };

    if (dataset.labeled()) {
        std::vector<std::size_t> class0, class1;
        for (std::size_t i = 0; i < dataset.n_instances(); ++i)
            (dataset.label(i) == 0 ? class0 : class1).push_back(i);
        if (!class0.empty()) split_group(class0);
        if (!class1.empty()) split_group(class1);
    } else {
        std::vector<std::size_t> all(dataset.n_instances());
        for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
        split_group(all);
    }

    if (train.empty() || test.empty())
        throw ConfigError("split would leave one side empty (n=" +
                          std::to_string(dataset.n_instances()) + ", fraction=" +
                          std::to_string(spec.train_fraction) + ")");
    std::sort(train.begin(), train.end());
    std::sort(test.begin(), test.end());
    return {std::move(train), std::move(test)};
}

std::pair<MTSDataset, MTSDataset> split(const MTSDataset& dataset, const SplitSpec& spec) {
    auto [train_idx, test_idx] = split_indices(dataset, spec);
    return {dataset.select_instances(train_idx), dataset.select_instances(test_idx)};
}

// ---------------------------------------------------------------------------
// EEG-like fixture
// ---------------------------------------------------------------------------

std::pair<MTSDataset, std::vector<Event>> generate_eeg_like(const EegFixtureSpec& spec) {
    if (spec.n_channels < 1 || spec.total_length < 2 || spec.event_len < 2)
        throw ConfigError("invalid EEG fixture spec");
    if (!(spec.ar_coeff > -1.0 && spec.ar_coeff < 1.0))
        throw ConfigError("AR coefficient must lie in (-1,1)");

    const std::size_t C = spec.n_channels;
    const std::size_t T = spec.total_length;
    MTSDataset data(1, C, T);

    // AR(1) background, independent per channel.
    for (std::size_t c = 0; c < C; ++c) {
        Rng rng(derive_seed(spec.seed, "eeg-background", c));
        auto s = data.series(0, c);
        double prev = 0.0;
        for (std::size_t t = 0; t < T; ++t) {
            prev = spec.ar_coeff * prev + rng.normal(0.0, spec.noise_sd);
            s[t] = prev;
        }
    }

    // Blink bursts at evenly spread positions with jitter; every channel sees
    // the same burst scaled by a fixed per-channel gain.
    Rng event_rng(derive_seed(spec.seed, "eeg-events"));
    std::vector<double> gains(C);
    for (std::size_t c = 0; c < C; ++c) gains[c] = 1.0 - 0.12 * static_cast<double>(c);

    std::vector<Event> events;
    const std::size_t slot = T / (spec.n_events + 1);
    if (slot <= 2 * spec.event_len) throw ConfigError("recording too short for event count");
    for (std::size_t k = 0; k < spec.n_events; ++k) {
        const std::size_t base = (k + 1) * slot;
        const std::size_t jitter = event_rng.uniform_index(slot / 4 + 1);
        const std::size_t start = base + jitter;
        if (start + spec.event_len > T) continue;
        const double amp = event_rng.normal(spec.blink_amp_mean, spec.blink_amp_sd);
        const double decay = 6.0 / static_cast<double>(spec.event_len);
        for (std::size_t c = 0; c < C; ++c) {
            auto s = data.series(0, c);
            for (std::size_t u = 0; u < spec.event_len; ++u) {
                const double t = static_cast<double>(u);
                s[start + u] += gains[c] * amp * std::exp(-decay * t) *
                                std::sin(2.0 * M_PI * spec.blink_freq * t);
            }
        }
        events.push_back({0, start, start + spec.event_len});
    }
    if (events.empty()) throw DataError("fixture produced no events");
    return {std::move(data), std::move(events)};
}

} // namespace cosci

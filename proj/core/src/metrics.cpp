#include "ids/metrics.hpp"

#include <cstdio>
#include <numeric>
#include <set>
#include <utility>

#include "ids/error.hpp"

namespace ids {

ConfusionMatrix::ConfusionMatrix(std::size_t n_classes,
                                 std::vector<std::string> label_names)
    : n_classes_(n_classes),
      counts_(n_classes * n_classes, 0),
      label_names_(std::move(label_names)) {
    if (label_names_.empty()) {
        for (std::size_t c = 0; c < n_classes_; ++c) {
            label_names_.push_back("class_" + std::to_string(c));
        }
    }
    if (label_names_.size() != n_classes_) {
        throw DataError("confusion matrix got " + std::to_string(label_names_.size()) +
                        " label names for " + std::to_string(n_classes_) + " classes");
    }
}

std::int64_t ConfusionMatrix::total() const {
    return std::accumulate(counts_.begin(), counts_.end(), std::int64_t{0});
}

std::int64_t ConfusionMatrix::trace() const {
    std::int64_t t = 0;
    for (std::size_t c = 0; c < n_classes_; ++c) t += at(c, c);
    return t;
}

std::int64_t ConfusionMatrix::support(std::size_t c) const {
    std::int64_t s = 0;
    for (std::size_t j = 0; j < n_classes_; ++j) s += at(c, j);
    return s;
}

ConfusionMatrix& ConfusionMatrix::operator+=(const ConfusionMatrix& other) {
    if (other.n_classes_ != n_classes_) {
        throw DataError("cannot pool confusion matrices of different sizes");
    }
    for (std::size_t i = 0; i < counts_.size(); ++i) counts_[i] += other.counts_[i];
    return *this;
}

nlohmann::json ConfusionMatrix::to_json() const {
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t a = 0; a < n_classes_; ++a) {
        nlohmann::json row = nlohmann::json::array();
        for (std::size_t p = 0; p < n_classes_; ++p) row.push_back(at(a, p));
        rows.push_back(std::move(row));
    }
    return {{"labels", label_names_}, {"counts", std::move(rows)}};
}

ConfusionMatrix ConfusionMatrix::from_json(const nlohmann::json& doc) {
    if (!doc.is_object() || !doc.contains("labels") || !doc.contains("counts")) {
        throw DataError("confusion matrix document must carry 'labels' and 'counts'");
    }
    auto labels = doc["labels"].get<std::vector<std::string>>();
    ConfusionMatrix cm(labels.size(), labels);
    const nlohmann::json& rows = doc["counts"];
    if (!rows.is_array() || rows.size() != labels.size()) {
        throw DataError("confusion matrix counts must be a KxK array");
    }
    for (std::size_t a = 0; a < labels.size(); ++a) {
        if (!rows[a].is_array() || rows[a].size() != labels.size()) {
            throw DataError("confusion matrix counts must be a KxK array");
        }
        for (std::size_t p = 0; p < labels.size(); ++p) {
            cm.at(a, p) = rows[a][p].get<std::int64_t>();
        }
    }
    return cm;
}

ConfusionMatrix confusion(std::span<const int> y_true, std::span<const int> y_pred,
                          std::size_t n_classes, std::vector<std::string> label_names) {
    if (y_true.size() != y_pred.size()) {
        throw DataError("confusion inputs differ in length: " +
                        std::to_string(y_true.size()) + " vs " +
                        std::to_string(y_pred.size()));
    }
    ConfusionMatrix cm(n_classes, std::move(label_names));
    for (std::size_t i = 0; i < y_true.size(); ++i) {
        const int a = y_true[i];
        const int p = y_pred[i];
        if (a < 0 || p < 0 || static_cast<std::size_t>(a) >= n_classes ||
            static_cast<std::size_t>(p) >= n_classes) {
            throw DataError("class code out of range at row " + std::to_string(i));
        }
        ++cm.at(static_cast<std::size_t>(a), static_cast<std::size_t>(p));
    }
    return cm;
}

BinaryCounts one_vs_rest(const ConfusionMatrix& cm, std::size_t c) {
    if (c >= cm.n_classes()) {
        throw DataError("class code " + std::to_string(c) + " out of range");
    }
    BinaryCounts b;
    const std::int64_t total = cm.total();
    b.tp = cm.at(c, c);
    for (std::size_t j = 0; j < cm.n_classes(); ++j) {
        if (j == c) continue;
        b.fn += cm.at(c, j);
        b.fp += cm.at(j, c);
    }
    b.tn = total - b.tp - b.fn - b.fp;
    return b;
}

namespace {

double ratio(std::int64_t num, std::int64_t den, bool* degenerate) {
    if (den == 0) {
        if (degenerate != nullptr) *degenerate = true;
        return 0.0;
    }
    return static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

double accuracy(const ConfusionMatrix& cm, bool* degenerate) {
    return ratio(cm.trace(), cm.total(), degenerate);
}

double recall(const BinaryCounts& b, bool* degenerate) {
    return ratio(b.tp, b.tp + b.fn, degenerate);
}

double precision(const BinaryCounts& b, bool* degenerate) {
    return ratio(b.tp, b.tp + b.fp, degenerate);
}

double f1(double pr, double rc, bool* degenerate) {
    if (pr + rc == 0.0) {
        if (degenerate != nullptr) *degenerate = true;
        return 0.0;
    }
    return 2.0 * (rc * pr) / (rc + pr);
}

double far(const BinaryCounts& b, bool* degenerate) {
    if (b.tp + b.fn == 0) {
        if (degenerate != nullptr) *degenerate = true;
        return 0.0;
    }
    return 1.0 - recall(b);
}

double dr(const BinaryCounts& b, bool* degenerate) {
    return 100.0 * recall(b, degenerate);
}

double fpr(const BinaryCounts& b, bool* degenerate) {
    return ratio(b.fp, b.fp + b.tn, degenerate);
}

std::string to_string(AverageScheme scheme) {
    return scheme == AverageScheme::macro ? "macro" : "weighted";
}

AverageScheme average_scheme_from_string(const std::string& s) {
    if (s == "macro") return AverageScheme::macro;
    if (s == "weighted") return AverageScheme::weighted;
    throw ConfigError("unknown averaging scheme '" + s + "'");
}

namespace {

void flag(std::vector<std::string>& flags, const std::string& where,
          const char* metric) {
    flags.push_back(where + "/" + metric);
}

ClassMetrics metrics_for_class(const ConfusionMatrix& cm, std::size_t c,
                               std::vector<std::string>& flags) {
    const BinaryCounts b = one_vs_rest(cm, c);
    const std::string& name = cm.label_names()[c];
    ClassMetrics m;
    m.support = b.tp + b.fn;
    bool deg = false;
    m.precision = precision(b, &deg);
    if (deg) flag(flags, name, "precision");
    deg = false;
    m.recall = recall(b, &deg);
    if (deg) flag(flags, name, "recall");
    deg = false;
    m.f1 = f1(m.precision, m.recall, &deg);
    if (deg) flag(flags, name, "f1s");
    deg = false;
    m.far = far(b, &deg);
    if (deg) flag(flags, name, "far");
    deg = false;
    m.dr = dr(b, &deg);
    if (deg) flag(flags, name, "dr");
    deg = false;
    m.fpr = fpr(b, &deg);
    if (deg) flag(flags, name, "fpr");
    return m;
}

AverageRow macro_row(const std::vector<ClassMetrics>& per_class) {
    AverageRow row;
    if (per_class.empty()) return row;
    const double k = static_cast<double>(per_class.size());
    for (const ClassMetrics& m : per_class) {
        row.precision += m.precision;
        row.recall += m.recall;
        row.f1 += m.f1;
        row.far += m.far;
        row.dr += m.dr;
        row.fpr += m.fpr;
    }
    row.precision /= k;
    row.recall /= k;
    row.f1 /= k;
    row.far /= k;
    row.dr /= k;
    row.fpr /= k;
    return row;
}

AverageRow weighted_row(const std::vector<ClassMetrics>& per_class,
                        std::vector<std::string>& flags) {
    AverageRow row;
    double total = 0.0;
    for (const ClassMetrics& m : per_class) total += static_cast<double>(m.support);
    if (total == 0.0) {
        flag(flags, "overall", "weighted");
        return row;
    }
    for (const ClassMetrics& m : per_class) {
        const double w = static_cast<double>(m.support) / total;
        row.precision += w * m.precision;
        row.recall += w * m.recall;
        row.f1 += w * m.f1;
        row.far += w * m.far;
        row.dr += w * m.dr;
        row.fpr += w * m.fpr;
    }
    return row;
}

}  // namespace

Report report_from_confusion(const ConfusionMatrix& cm, AverageScheme scheme) {
    Report report;
    report.label_names = cm.label_names();
    report.scheme = scheme;
    for (std::size_t c = 0; c < cm.n_classes(); ++c) {
        report.per_class.push_back(metrics_for_class(cm, c, report.degenerate_flags));
    }
    bool deg = false;
    report.accuracy = accuracy(cm, &deg);
    if (deg) flag(report.degenerate_flags, "overall", "accuracy");
    report.macro_avg = macro_row(report.per_class);
    report.weighted_avg = weighted_row(report.per_class, report.degenerate_flags);
    return report;
}

Report aggregate(const std::vector<Report>& reports, AverageScheme scheme) {
    if (reports.empty()) throw DataError("cannot aggregate zero reports");
    const Report& first = reports.front();
    for (const Report& r : reports) {
        if (r.label_names != first.label_names) {
            throw DataError("cannot aggregate reports over different class sets");
        }
    }

    Report out;
    out.label_names = first.label_names;
    out.scheme = scheme;
    out.per_class.resize(first.per_class.size());
    const double n = static_cast<double>(reports.size());
    std::set<std::string> flags;
    for (const Report& r : reports) {
        for (std::size_t c = 0; c < out.per_class.size(); ++c) {
            out.per_class[c].precision += r.per_class[c].precision / n;
            out.per_class[c].recall += r.per_class[c].recall / n;
            out.per_class[c].f1 += r.per_class[c].f1 / n;
            out.per_class[c].far += r.per_class[c].far / n;
            out.per_class[c].dr += r.per_class[c].dr / n;
            out.per_class[c].fpr += r.per_class[c].fpr / n;
            out.per_class[c].support += r.per_class[c].support;
        }
        out.accuracy += r.accuracy / n;
        flags.insert(r.degenerate_flags.begin(), r.degenerate_flags.end());
        out.per_repeat.insert(out.per_repeat.end(), r.per_repeat.begin(),
                              r.per_repeat.end());
    }
    out.degenerate_flags.assign(flags.begin(), flags.end());
    out.macro_avg = macro_row(out.per_class);
    out.weighted_avg = weighted_row(out.per_class, out.degenerate_flags);
    return out;
}

namespace {

nlohmann::json row_to_json(const AverageRow& row) {
    return {{"precision", row.precision}, {"recall", row.recall}, {"f1s", row.f1},
            {"far", row.far},             {"dr", row.dr},         {"fpr", row.fpr}};
}

std::string fixed(double v, int places) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", places, v);
    return buf;
}

void markdown_metric_cells(std::string& out, double pr, double rc, double f1s,
                           double far_v, double dr_v) {
    out += " " + fixed(pr, 3) + " | " + fixed(rc, 3) + " | " + fixed(f1s, 3) + " | " +
           fixed(far_v, 3) + " | " + fixed(dr_v, 2) + " |\n";
}

}  // namespace

nlohmann::json Report::to_json() const {
    nlohmann::json per_class_json = nlohmann::json::array();
    for (std::size_t c = 0; c < per_class.size(); ++c) {
        const ClassMetrics& m = per_class[c];
        per_class_json.push_back({{"class", label_names[c]},
                                  {"precision", m.precision},
                                  {"recall", m.recall},
                                  {"f1s", m.f1},
                                  {"far", m.far},
                                  {"dr", m.dr},
                                  {"fpr", m.fpr},
                                  {"support", m.support}});
    }
    nlohmann::json per_repeat_json = nlohmann::json::array();
    for (const ConfusionMatrix& cm : per_repeat) per_repeat_json.push_back(cm.to_json());
    return {{"per_class", std::move(per_class_json)},
            {"overall",
             {{"accuracy", accuracy},
              {"macro", row_to_json(macro_avg)},
              {"weighted", row_to_json(weighted_avg)}}},
            {"scheme", to_string(scheme)},
            {"degenerate_flags", degenerate_flags},
            {"per_repeat", std::move(per_repeat_json)},
            {"pooling", pooling}};
}

std::string Report::to_markdown() const {
    std::string out;
    out += "| Class | PR | RC | F1s | FAR | DR |\n";
    out += "|---|---|---|---|---|---|\n";
    for (std::size_t c = 0; c < per_class.size(); ++c) {
        const ClassMetrics& m = per_class[c];
        out += "| " + label_names[c] + " |";
        markdown_metric_cells(out, m.precision, m.recall, m.f1, m.far, m.dr);
    }
    out += "\n";
    out += "| Overall | ACC | PR | RC | F1s | FAR | DR |\n";
    out += "|---|---|---|---|---|---|---|\n";
    out += "| macro | " + fixed(accuracy, 3) + " |";
    markdown_metric_cells(out, macro_avg.precision, macro_avg.recall, macro_avg.f1,
                          macro_avg.far, macro_avg.dr);
    out += "| weighted | " + fixed(accuracy, 3) + " |";
    markdown_metric_cells(out, weighted_avg.precision, weighted_avg.recall,
                          weighted_avg.f1, weighted_avg.far, weighted_avg.dr);
    return out;
}

}  // namespace ids

#include "seqrank/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace seqrank {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            fields.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur += ch;
        }
    }
    fields.push_back(cur);
    return fields;
}

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t");
    return s.substr(a, b - a + 1);
}

int parse_period(const std::string& text, int line_no) {
    std::string t = trim(text);
    if (t.empty()) throw ParseError("line " + std::to_string(line_no) + ": empty period");
    for (char ch : t) {
        if (!std::isdigit(static_cast<unsigned char>(ch))) {
            throw ParseError("line " + std::to_string(line_no) +
                             ": period is not a non-negative integer: '" + t + "'");
        }
    }
    try {
        return std::stoi(t);
    } catch (const std::exception&) {
        throw ParseError("line " + std::to_string(line_no) + ": period out of range: '" + t + "'");
    }
}

double parse_grade(const std::string& text, int line_no) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception&) {
        throw ParseError("line " + std::to_string(line_no) + ": bad grade value: '" + text + "'");
    }
    if (used != text.size()) {
        throw ParseError("line " + std::to_string(line_no) + ": bad grade value: '" + text + "'");
    }
    if (v < 0.0) {
        throw ParseError("line " + std::to_string(line_no) + ": negative grade: '" + text + "'");
    }
    return v;
}

bool parse_transfer(const std::string& text, int line_no) {
    std::string t = trim(text);
    if (t == "0" || t == "false") return false;
    if (t == "1" || t == "true") return true;
    throw ParseError("line " + std::to_string(line_no) +
                     ": transfer flag must be one of 0,1,true,false: '" + t + "'");
}

// Survivor mask for retake dedup: for each (actor, item) keep only the record
// with the largest period, later file position winning exact ties.
std::vector<bool> dedup_mask(const std::vector<EventRecord>& records) {
    std::map<std::pair<std::string, std::string>, std::size_t> best;
    for (std::size_t idx = 0; idx < records.size(); ++idx) {
        auto key = std::make_pair(records[idx].actor_id, records[idx].item_id);
        auto it = best.find(key);
        if (it == best.end() || records[idx].period >= records[it->second].period) {
            best[key] = idx;
        }
    }
    std::vector<bool> keep(records.size(), false);
    for (const auto& [key, idx] : best) keep[idx] = true;
    return keep;
}

int count_distinct_actors(const std::vector<EventRecord>& records) {
    std::unordered_set<std::string> actors;
    for (const auto& rec : records) actors.insert(rec.actor_id);
    return static_cast<int>(actors.size());
}

} // namespace

const char* band_name(GpaBand band) {
    switch (band) {
        case GpaBand::all: return "all";
        case GpaBand::A: return "A";
        case GpaBand::B: return "B";
        case GpaBand::C: return "C";
    }
    return "?";
}

GpaBand band_from_string(const std::string& s) {
    if (s == "all") return GpaBand::all;
    if (s == "A") return GpaBand::A;
    if (s == "B") return GpaBand::B;
    if (s == "C") return GpaBand::C;
    throw UsageError("unknown GPA band: '" + s + "' (expected all|A|B|C)");
}

void FilterSpec::validate() const {
    if (!(c_min < b_min && b_min < a_min)) {
        throw UsageError("band edges must be strictly increasing (c_min < b_min < a_min)");
    }
    if (min_item_frac < 0.0 || min_item_frac > 1.0) {
        throw UsageError("min_item_frac must lie in [0, 1]");
    }
}

std::string FilterSpec::describe() const {
    std::ostringstream os;
    os << "cohort=" << (cohort_label ? *cohort_label : "<any>")
       << " exclude_transfers=" << (exclude_transfers ? "yes" : "no")
       << " gpa_band=" << band_name(gpa_band);
    if (gpa_band != GpaBand::all) {
        os << " band_edges=" << c_min << "/" << b_min << "/" << a_min;
    }
    os << " min_item_frac=" << min_item_frac;
    return os.str();
}

EventLog parse_event_log(std::istream& source, const CsvSchema& schema) {
    std::string line;
    int line_no = 0;
    // Leading '#' lines are metadata comments (synth output carries them).
    do {
        if (!std::getline(source, line)) {
            throw ParseError("empty input: missing header row");
        }
        ++line_no;
    } while (!line.empty() && line[0] == '#');
    std::vector<std::string> header = split_csv_line(line);
    for (auto& h : header) h = trim(h);

    auto col = [&](const std::string& name) -> int {
        auto it = std::find(header.begin(), header.end(), name);
        return it == header.end() ? -1 : static_cast<int>(it - header.begin());
    };
    int c_actor = col(schema.actor);
    int c_item = col(schema.item);
    int c_period = col(schema.period);
    if (c_actor < 0 || c_item < 0 || c_period < 0) {
        std::ostringstream msg;
        msg << "schema error: missing required column(s):";
        if (c_actor < 0) msg << " " << schema.actor;
        if (c_item < 0) msg << " " << schema.item;
        if (c_period < 0) msg << " " << schema.period;
        throw ParseError(msg.str());
    }
    int c_grade = col(schema.grade);
    int c_cohort = col(schema.cohort);
    int c_transfer = col(schema.transfer);

    EventLog log;
    std::vector<std::string> ids;
    while (std::getline(source, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        std::vector<std::string> fields = split_csv_line(line);
        if (fields.size() != header.size()) {
            throw ParseError("line " + std::to_string(line_no) + ": expected " +
                             std::to_string(header.size()) + " fields, got " +
                             std::to_string(fields.size()));
        }
        EventRecord rec;
        rec.actor_id = trim(fields[c_actor]);
        rec.item_id = trim(fields[c_item]);
        if (rec.actor_id.empty() || rec.item_id.empty()) {
            throw ParseError("line " + std::to_string(line_no) + ": empty actor or item id");
        }
        rec.period = parse_period(fields[c_period], line_no);
        if (c_grade >= 0) {
            std::string g = trim(fields[c_grade]);
            if (!g.empty()) rec.grade_points = parse_grade(g, line_no);
        }
        if (c_cohort >= 0) {
            std::string c = trim(fields[c_cohort]);
            if (!c.empty()) rec.cohort_label = c;
        }
        if (c_transfer >= 0) {
            std::string t = trim(fields[c_transfer]);
            if (!t.empty()) rec.transfer_flag = parse_transfer(t, line_no);
        }
        ids.push_back(rec.item_id);
        log.records.push_back(std::move(rec));
    }
    log.items = ItemCatalog::from_ids_sorted(std::move(ids));
    log.actor_count = count_distinct_actors(log.records);
    return log;
}

EventLog apply_cohort_filter(const EventLog& log, const FilterSpec& spec, FilterStats* stats) {
    spec.validate();
    FilterStats local;
    FilterStats& st = stats ? *stats : local;

    if (spec.gpa_band != GpaBand::all) {
        bool any_grade = std::any_of(log.records.begin(), log.records.end(),
                                     [](const EventRecord& r) { return r.grade_points.has_value(); });
        if (!any_grade) {
            throw UsageError("GPA banding requested but the log carries no grade data");
        }
    }

    // Pass 1: last-period cohort label per actor (later file position wins a
    // period tie) and whether the actor has any transfer-flagged record.
    struct ActorInfo {
        int last_period = -1;
        std::optional<std::string> last_label;
        bool transfer = false;
    };
    std::unordered_map<std::string, ActorInfo> info;
    for (const auto& rec : log.records) {
        ActorInfo& ai = info[rec.actor_id];
        if (rec.period >= ai.last_period) {
            ai.last_period = rec.period;
            ai.last_label = rec.cohort_label;
        }
        ai.transfer = ai.transfer || rec.transfer_flag;
    }

    std::unordered_set<std::string> drop;
    for (const auto& [actor, ai] : info) {
        if (spec.cohort_label) {
            if (!ai.last_label || *ai.last_label != *spec.cohort_label) {
                drop.insert(actor);
                ++st.dropped_cohort;
                continue;
            }
        }
        if (spec.exclude_transfers && ai.transfer) {
            drop.insert(actor);
            ++st.dropped_transfer;
        }
    }

    std::vector<EventRecord> kept;
    kept.reserve(log.records.size());
    for (const auto& rec : log.records) {
        if (!drop.count(rec.actor_id)) kept.push_back(rec);
    }

    // Retake dedup on the surviving actors.
    std::vector<bool> keep = dedup_mask(kept);
    std::vector<EventRecord> deduped;
    deduped.reserve(kept.size());
    for (std::size_t i = 0; i < kept.size(); ++i) {
        if (keep[i]) {
            deduped.push_back(kept[i]);
        } else {
            ++st.dedup_removed;
        }
    }

    // GPA banding over the deduplicated records. Actors without any graded
    // record cannot be assigned a band and are dropped from banded cohorts.
    if (spec.gpa_band != GpaBand::all) {
        std::unordered_map<std::string, std::pair<double, int>> grade_sum;
        for (const auto& rec : deduped) {
            if (rec.grade_points) {
                auto& [sum, cnt] = grade_sum[rec.actor_id];
                sum += *rec.grade_points;
                ++cnt;
            }
        }
        std::unordered_set<std::string> in_band;
        for (const auto& [actor, sc] : grade_sum) {
            double gpa = sc.first / sc.second;
            bool ok = false;
            switch (spec.gpa_band) {
                case GpaBand::A: ok = gpa >= spec.a_min; break;
                case GpaBand::B: ok = gpa >= spec.b_min && gpa < spec.a_min; break;
                case GpaBand::C: ok = gpa >= spec.c_min && gpa < spec.b_min; break;
                case GpaBand::all: ok = true; break;
            }
            if (ok) in_band.insert(actor);
        }
        std::unordered_set<std::string> before;
        for (const auto& rec : deduped) before.insert(rec.actor_id);
        st.dropped_gpa = static_cast<int>(before.size() - in_band.size());
        std::vector<EventRecord> banded;
        banded.reserve(deduped.size());
        for (auto& rec : deduped) {
            if (in_band.count(rec.actor_id)) banded.push_back(std::move(rec));
        }
        deduped = std::move(banded);
    }

    EventLog out;
    out.records = std::move(deduped);
    out.items = log.items;
    out.actor_count = count_distinct_actors(out.records);
    return out;
}

EventLog prune_rare_items(const EventLog& log, double min_frac, PruneStats* stats) {
    if (min_frac < 0.0 || min_frac > 1.0) throw UsageError("min_item_frac must lie in [0, 1]");

    std::unordered_map<std::string, std::unordered_set<std::string>> takers;
    for (const auto& rec : log.records) takers[rec.item_id].insert(rec.actor_id);

    // ceil with a guard against FP noise in min_frac * n_s (e.g. 0.1 * 30).
    double raw = min_frac * log.actor_count;
    auto threshold = static_cast<std::int64_t>(std::ceil(raw - 1e-9));

    std::vector<std::pair<std::string, std::string>> kept_entries;
    std::unordered_set<std::string> kept_ids;
    for (const auto& [id, name] : log.items.entries()) {
        auto it = takers.find(id);
        std::int64_t n_takers = it == takers.end() ? 0 : static_cast<std::int64_t>(it->second.size());
        if (n_takers >= threshold) {
            kept_entries.emplace_back(id, name);
            kept_ids.insert(id);
        } else if (stats) {
            stats->pruned_items.push_back(id);
        }
    }

    EventLog out;
    out.items = ItemCatalog(std::move(kept_entries));
    out.actor_count = log.actor_count; // zero-record actors still count
    out.records.reserve(log.records.size());
    for (const auto& rec : log.records) {
        if (kept_ids.count(rec.item_id)) out.records.push_back(rec);
    }
    return out;
}

CountMatrix build_count_matrix(const EventLog& log) {
    const int n = log.items.size();
    CountMatrix c(n);

    std::map<std::string, std::vector<std::pair<int, int>>> per_actor; // item index, period
    std::set<std::pair<std::string, int>> seen;
    for (const auto& rec : log.records) {
        int idx = log.items.index_of(rec.item_id);
        if (idx < 0) throw InvariantError("count matrix: record item missing from catalog");
        if (!seen.emplace(rec.actor_id, idx).second) {
            throw InvariantError("count matrix: log not deduplicated (actor " + rec.actor_id +
                                 ", item " + rec.item_id + ")");
        }
        per_actor[rec.actor_id].emplace_back(idx, rec.period);
    }

    for (const auto& [actor, taken] : per_actor) {
        for (std::size_t a = 0; a < taken.size(); ++a) {
            for (std::size_t b = a + 1; b < taken.size(); ++b) {
                auto [ia, pa] = taken[a];
                auto [ib, pb] = taken[b];
                if (pa < pb) {
                    ++c.at(ia, ib);
                } else if (pb < pa) {
                    ++c.at(ib, ia);
                }
                // same-period pairs contribute to neither direction
            }
        }
    }
    return c;
}

TransitionMatrix build_transition_matrix(const CountMatrix& c) {
    TransitionMatrix p;
    p.n_c = c.n_c;
    p.probs = Matrix(c.n_c, c.n_c);
    for (int i = 0; i < c.n_c; ++i) {
        for (int j = i + 1; j < c.n_c; ++j) {
            std::int64_t denom = c.at(i, j) + c.at(j, i);
            if (denom > 0) {
                p.probs(i, j) = static_cast<double>(c.at(i, j)) / static_cast<double>(denom);
                p.probs(j, i) = static_cast<double>(c.at(j, i)) / static_cast<double>(denom);
            }
        }
    }
    return p;
}

FlowMatrix build_flow_matrix(const TransitionMatrix& p) {
    FlowMatrix f;
    f.n_c = p.n_c;
    f.flows = Matrix(p.n_c, p.n_c);
    for (int i = 0; i < p.n_c; ++i) {
        for (int j = i + 1; j < p.n_c; ++j) {
            double pij = p.probs(i, j);
            double pji = p.probs(j, i);
            if (pij == 0.0 && pji == 0.0) continue; // never compared
            double value;
            if (pij > 0.5) {
                value = pij;
            } else if (pij < 0.5) {
                value = pij - 1.0;
            } else {
                // Exact tie: +0.5 goes to the lower item index (here i < j).
                value = 0.5;
            }
            f.flows(i, j) = value;
            f.flows(j, i) = -value;
        }
    }
    return f;
}

MeasurementGraph build_measurement_graph(const CountMatrix& c) {
    MeasurementGraph g;
    g.n_c = c.n_c;
    for (int i = 0; i < c.n_c; ++i) {
        for (int j = i + 1; j < c.n_c; ++j) {
            if (c.at(i, j) + c.at(j, i) > 0) g.edges.emplace_back(i, j);
        }
    }
    return g;
}

} // namespace seqrank

#include "rerc/metrics.hpp"

#include <algorithm>
#include <cstdio>
#include <set>
#include <sstream>

#include "rerc/errors.hpp"
#include "rerc/text.hpp"

namespace rerc {

using nlohmann::json;
using nlohmann::ordered_json;

std::string normalize_answer(std::string_view s) {
  const std::u32string folded = text::to_u32(text::normalize(s));
  std::u32string spaced;
  spaced.reserve(folded.size());
  for (char32_t c : folded) spaced.push_back(text::is_punct_or_symbol(c) ? U' ' : c);
  const std::string flat = text::to_utf8(spaced);

  std::string out;
  std::size_t i = 0;
  while (i < flat.size()) {
    while (i < flat.size() && flat[i] == ' ') ++i;
    std::size_t j = i;
    while (j < flat.size() && flat[j] != ' ') ++j;
    if (j > i) {
      const std::string_view w(flat.data() + i, j - i);
      if (w != "a" && w != "an" && w != "the") {
        if (!out.empty()) out.push_back(' ');
        out.append(w);
      }
    }
    i = j;
  }
  return out;
}

namespace {

std::vector<std::string> split_words(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

double harmonic(double p, double r) { return p + r > 0.0 ? 2.0 * p * r / (p + r) : 0.0; }

template <class T>
Prf compare_sets(const std::set<T>& pred, const std::set<T>& gold) {
  Prf out;
  if (pred.empty() && gold.empty()) return {1.0, 1.0, 1.0, 1.0};
  std::size_t common = 0;
  for (const auto& x : pred) common += gold.count(x);
  out.precision = pred.empty() ? 0.0 : static_cast<double>(common) / static_cast<double>(pred.size());
  out.recall = gold.empty() ? 0.0 : static_cast<double>(common) / static_cast<double>(gold.size());
  out.f1 = harmonic(out.precision, out.recall);
  out.em = pred == gold ? 1.0 : 0.0;
  return out;
}

}  // namespace

Prf answer_scores(std::string_view pred, std::string_view gold) {
  const std::string p = normalize_answer(pred);
  const std::string g = normalize_answer(gold);
  Prf out;
  out.em = p == g ? 1.0 : 0.0;
  auto special = [](const std::string& s) { return s == "yes" || s == "no" || s == "noanswer"; };
  if ((special(p) || special(g)) && p != g) return out;
  const auto pt = split_words(p);
  const auto gt = split_words(g);
  if (pt.empty() || gt.empty()) {
    if (pt.empty() && gt.empty()) return {1.0, 1.0, 1.0, 1.0};
    return out;
  }
  std::map<std::string, int> bag;
  for (const auto& w : gt) ++bag[w];
  std::size_t same = 0;
  for (const auto& w : pt) {
    auto it = bag.find(w);
    if (it != bag.end() && it->second > 0) {
      --it->second;
      ++same;
    }
  }
  if (same == 0) return out;
  out.precision = static_cast<double>(same) / static_cast<double>(pt.size());
  out.recall = static_cast<double>(same) / static_cast<double>(gt.size());
  out.f1 = harmonic(out.precision, out.recall);
  return out;
}

Prf sp_scores(std::span<const SupportingFact> pred, std::span<const SupportingFact> gold) {
  return compare_sets(std::set<SupportingFact>(pred.begin(), pred.end()),
                      std::set<SupportingFact>(gold.begin(), gold.end()));
}

Prf evidence_scores(std::span<const EvidenceTriple> pred, std::span<const EvidenceTriple> gold) {
  using Key = std::array<std::string, 3>;
  auto keys = [](std::span<const EvidenceTriple> v) {
    std::set<Key> out;
    for (const auto& t : v) out.insert({normalize_answer(t.subject), normalize_answer(t.relation), normalize_answer(t.object)});
    return out;
  };
  return compare_sets(keys(pred), keys(gold));
}

Prf joint_scores(const Prf& ans, const Prf& sp, const Prf& ev) {
  Prf out;
  out.em = ans.em * sp.em * ev.em;
  out.precision = ans.precision * sp.precision * ev.precision;
  out.recall = ans.recall * sp.recall * ev.recall;
  out.f1 = harmonic(out.precision, out.recall);
  return out;
}

Predictions parse_predictions(const json& doc) {
  if (!doc.is_object()) throw SchemaError("", "", "prediction file must be a JSON object");
  Predictions p;
  if (!doc.contains("answer") || !doc.at("answer").is_object()) {
    throw SchemaError("", "answer", "prediction file needs an \"answer\" object");
  }
  for (const auto& [id, v] : doc.at("answer").items()) {
    if (!v.is_string()) throw SchemaError(id, "answer", "must be a string");
    p.answer[id] = v.get<std::string>();
  }
  if (doc.contains("sp")) {
    if (!doc.at("sp").is_object()) throw SchemaError("", "sp", "must be an object");
    for (const auto& [id, v] : doc.at("sp").items()) {
      if (!v.is_array()) throw SchemaError(id, "sp", "must be a list of [title, sentence]");
      auto& facts = p.sp[id];
      for (const auto& f : v) {
        if (!f.is_array() || f.size() != 2 || !f[0].is_string() || !f[1].is_number_integer() || f[1].get<long long>() < 0) {
          throw SchemaError(id, "sp", "entries must be [title, sentence-index]");
        }
        facts.push_back({f[0].get<std::string>(), f[1].get<std::size_t>()});
      }
    }
  }
  if (doc.contains("evidence")) {
    if (!doc.at("evidence").is_object()) throw SchemaError("", "evidence", "must be an object");
    for (const auto& [id, v] : doc.at("evidence").items()) {
      if (!v.is_array()) throw SchemaError(id, "evidence", "must be a list of [subject, relation, object]");
      auto& triples = p.evidence[id];
      for (const auto& t : v) {
        if (!t.is_array() || t.size() != 3 || !t[0].is_string() || !t[1].is_string() || !t[2].is_string()) {
          throw SchemaError(id, "evidence", "entries must be [subject, relation, object]");
        }
        triples.push_back({t[0].get<std::string>(), t[1].get<std::string>(), t[2].get<std::string>()});
      }
    }
  }
  return p;
}

Predictions load_predictions(const std::filesystem::path& path) {
  json doc;
  try {
    doc = json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw SchemaError("", "", path.string() + ": " + e.what());
  }
  return parse_predictions(doc);
}

Predictions gold_as_predictions(std::span<const Example> gold) {
  Predictions p;
  for (const auto& ex : gold) {
    p.answer[ex.id] = ex.gold_answer;
    p.sp[ex.id] = ex.supporting_facts;
    p.evidence[ex.id] = ex.gold_evidence;
  }
  return p;
}

AxisScores score_question(const Predictions& pred, const Example& gold) {
  static const std::vector<SupportingFact> kNoFacts;
  static const std::vector<EvidenceTriple> kNoTriples;
  AxisScores s;
  const auto a = pred.answer.find(gold.id);
  if (a == pred.answer.end()) return s;
  s.answer = answer_scores(a->second, gold.gold_answer);
  const auto f = pred.sp.find(gold.id);
  s.sp = sp_scores(f == pred.sp.end() ? kNoFacts : f->second, gold.supporting_facts);
  const auto e = pred.evidence.find(gold.id);
  s.evidence = evidence_scores(e == pred.evidence.end() ? kNoTriples : e->second, gold.gold_evidence);
  s.joint = joint_scores(s.answer, s.sp, s.evidence);
  return s;
}

namespace {

void accumulate(Prf& into, const Prf& x) {
  into.em += x.em;
  into.f1 += x.f1;
  into.precision += x.precision;
  into.recall += x.recall;
}

void accumulate(AxisScores& into, const AxisScores& x) {
  accumulate(into.answer, x.answer);
  accumulate(into.sp, x.sp);
  accumulate(into.evidence, x.evidence);
  accumulate(into.joint, x.joint);
}

void divide(Prf& p, double n) {
  p.em /= n;
  p.f1 /= n;
  p.precision /= n;
  p.recall /= n;
}

void divide(AxisScores& a, std::size_t n) {
  if (n == 0) return;
  const double d = static_cast<double>(n);
  divide(a.answer, d);
  divide(a.sp, d);
  divide(a.evidence, d);
  divide(a.joint, d);
}

}  // namespace

ScoreReport evaluate(const Predictions& pred, std::span<const Example> gold, bool allow_partial) {
  ScoreReport r;
  std::set<std::string, std::less<>> gold_ids;
  std::vector<std::string> missing;
  for (const auto& ex : gold) {
    gold_ids.insert(ex.id);
    if (!pred.answer.count(ex.id)) missing.push_back(ex.id);
  }
  std::vector<std::string> unexpected;
  for (const auto& [id, _] : pred.answer) {
    if (!gold_ids.count(id)) unexpected.push_back(id);
  }
  if (!allow_partial && (!missing.empty() || !unexpected.empty())) {
    std::string msg = std::to_string(missing.size()) + " gold id(s) without a prediction, " +
                      std::to_string(unexpected.size()) + " predicted id(s) not in gold";
    if (!missing.empty()) msg += "; first missing: " + missing.front();
    if (!unexpected.empty()) msg += "; first unexpected: " + unexpected.front();
    throw InvariantViolation(msg);
  }
  r.missing = missing.size();
  r.unexpected = unexpected.size();
  for (const auto& ex : gold) {
    const AxisScores s = score_question(pred, ex);
    accumulate(r.overall, s);
    accumulate(r.per_type[ex.qtype], s);
    ++r.n_per_type[ex.qtype];
    ++r.n;
  }
  divide(r.overall, r.n);
  for (auto& [t, s] : r.per_type) divide(s, r.n_per_type[t]);
  return r;
}

namespace {

std::string pct(double v) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%6.2f", v * 100.0);
  return buf;
}

std::string row(const std::string& name, std::size_t n, const AxisScores& s) {
  char head[48];
  std::snprintf(head, sizeof head, "%-18s %5zu", name.c_str(), n);
  std::string out = head;
  for (const Prf* p : {&s.answer, &s.sp, &s.evidence, &s.joint}) out += "  " + pct(p->em) + " " + pct(p->f1);
  return out + "\n";
}

ordered_json prf_json(const Prf& p) {
  ordered_json j;
  j["em"] = p.em;
  j["f1"] = p.f1;
  j["precision"] = p.precision;
  j["recall"] = p.recall;
  return j;
}

ordered_json axes_json(const AxisScores& s) {
  ordered_json j;
  j["answer"] = prf_json(s.answer);
  j["sp"] = prf_json(s.sp);
  j["evidence"] = prf_json(s.evidence);
  j["joint"] = prf_json(s.joint);
  return j;
}

}  // namespace

std::string report_table(const ScoreReport& r) {
  std::string out;
  out += "scope                  n    answer EM/F1     sp EM/F1    evidence EM/F1   joint EM/F1\n";
  out += row("all", r.n, r.overall);
  for (const auto& [t, s] : r.per_type) out += row(std::string(to_string(t)), r.n_per_type.at(t), s);
  if (r.missing) out += "missing predictions: " + std::to_string(r.missing) + "\n";
  return out;
}

ordered_json report_json(const ScoreReport& r) {
  ordered_json j;
  j["n"] = r.n;
  j["missing"] = r.missing;
  j["unexpected"] = r.unexpected;
  j["overall"] = axes_json(r.overall);
  ordered_json per = ordered_json::object();
  for (const auto& [t, s] : r.per_type) {
    ordered_json e = axes_json(s);
    e["n"] = r.n_per_type.at(t);
    per[std::string(to_string(t))] = std::move(e);
  }
  j["per_type"] = std::move(per);
  return j;
}

std::string report_csv(const ScoreReport& r) {
  std::ostringstream out;
  out << "scope,n,metric,em,f1,precision,recall\n";
  auto emit = [&out](const std::string& scope, std::size_t n, const AxisScores& s) {
    const std::pair<const char*, const Prf*> axes[] = {
        {"answer", &s.answer}, {"sp", &s.sp}, {"evidence", &s.evidence}, {"joint", &s.joint}};
    for (const auto& [name, p] : axes) {
      out << scope << ',' << n << ',' << name << ',' << p->em << ',' << p->f1 << ',' << p->precision << ','
          << p->recall << '\n';
    }
  };
  emit("all", r.n, r.overall);
  for (const auto& [t, s] : r.per_type) emit(std::string(to_string(t)), r.n_per_type.at(t), s);
  return out.str();
}

}  // namespace rerc

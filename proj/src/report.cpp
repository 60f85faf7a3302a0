#include "cloiseg/report.hpp"

#include <array>
#include <charconv>

namespace cloiseg {

namespace {

std::string label(double t) { return "@" + format_number(t); }

}  // namespace

std::string format_number(double v) {
  std::array<char, 32> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), ptr);
}

std::string format_number(const std::optional<double>& v) {
  return v ? format_number(*v) : std::string("NA");
}

void write_eval_csv(std::ostream& out, const EvalReport& report) {
  out << "class";
  for (const auto& s : report.per_threshold) {
    out << ",prec" << label(s.threshold) << ",rec" << label(s.threshold);
  }
  for (const auto& s : report.per_threshold) {
    const auto at = label(s.threshold);
    out << ",tp" << at << ",fp" << at << ",fn" << at;
  }
  out << '\n';

  for (auto c : kAllClasses) {
    const auto k = class_index(c);
    out << class_name(c);
    for (const auto& s : report.per_threshold) {
      out << ',' << format_number(s.per_class[k].precision) << ','
          << format_number(s.per_class[k].recall);
    }
    for (const auto& s : report.per_threshold) {
      const auto& cs = s.per_class[k];
      out << ',' << cs.tp << ',' << cs.fp << ',' << cs.fn;
    }
    out << '\n';
  }

  out << "mean";
  for (const auto& s : report.per_threshold) {
    out << ',' << format_number(s.mean_precision) << ',' << format_number(s.mean_recall);
  }
  for (const auto& s : report.per_threshold) {
    std::size_t tp = 0, fp = 0, fn = 0;
    for (auto c : kObjectClasses) {
      const auto& cs = s.per_class[class_index(c)];
      tp += cs.tp;
      fp += cs.fp;
      fn += cs.fn;
    }
    out << ',' << tp << ',' << fp << ',' << fn;
  }
  out << '\n';
}

void write_mu_csv(std::ostream& out, std::span<const MuRow> rows) {
  out << "mu,threshold";
  for (auto c : kAllClasses) out << ",prec_" << class_name(c) << ",rec_" << class_name(c);
  out << ",mPrec,mRec\n";
  for (const auto& row : rows) {
    out << row.mu << ',' << format_number(row.score.threshold);
    for (const auto& cs : row.score.per_class) {
      out << ',' << format_number(cs.precision) << ',' << format_number(cs.recall);
    }
    out << ',' << format_number(row.score.mean_precision) << ','
        << format_number(row.score.mean_recall) << '\n';
  }
}

void write_epsilon_csv(std::ostream& out, std::span<const EpsilonRow> rows) {
  out << "epsilon,components,instances";
  if (!rows.empty()) {
    for (const auto& s : rows.front().report.per_threshold) {
      out << ",mPrec" << label(s.threshold) << ",mRec" << label(s.threshold);
    }
  }
  out << '\n';
  for (const auto& row : rows) {
    out << format_number(row.epsilon) << ',' << row.components << ',' << row.instances;
    for (const auto& s : row.report.per_threshold) {
      out << ',' << format_number(s.mean_precision) << ',' << format_number(s.mean_recall);
    }
    out << '\n';
  }
}

void write_radius_csv(std::ostream& out, std::span<const RadiusRow> rows,
                      std::span<const double> thresholds) {
  out << "epsilon";
  for (double t : thresholds) out << ",mRec_ins" << label(t);
  for (double t : thresholds) {
    for (auto c : kAllClasses) out << ",Rec_ins_" << class_name(c) << label(t);
  }
  out << '\n';
  for (const auto& row : rows) {
    out << format_number(row.epsilon);
    for (double v : row.mrec_ins) out << ',' << format_number(v);
    for (const auto& per_class : row.rec_ins) {
      for (const auto& v : per_class) out << ',' << format_number(v);
    }
    out << '\n';
  }
}

void write_bias_csv(std::ostream& out, const BiasReport& report) {
  out << "facility,mPrec" << label(report.threshold) << ",mRec" << label(report.threshold)
      << '\n';
  for (const auto& f : report.facilities) {
    out << f.name << ',' << format_number(f.mean_precision) << ','
        << format_number(f.mean_recall) << '\n';
  }
  auto field = [](const std::optional<Spread>& s, bool stddev) {
    if (!s) return std::string("NA");
    return format_number(stddev ? s->stddev : s->mean);
  };
  out << "mean," << field(report.precision, false) << ',' << field(report.recall, false) << '\n';
  out << "std," << field(report.precision, true) << ',' << field(report.recall, true) << '\n';
}

void write_stats_csv(std::ostream& out, const ClassHistogram& histogram) {
  out << "class,instances,points\n";
  std::size_t instances = 0, points = 0;
  for (auto c : kAllClasses) {
    const auto& h = histogram[class_index(c)];
    out << class_name(c) << ',' << h.instances << ',' << h.points << '\n';
    instances += h.instances;
    points += h.points;
  }
  out << "total," << instances << ',' << points << '\n';
}

}  // namespace cloiseg

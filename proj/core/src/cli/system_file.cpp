#include "mahler/cli/system_file.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <sstream>

#include "mahler/exact/errors.hpp"
#include "mahler/exact/parse.hpp"

namespace mahler {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool valid_name(std::string_view s) {
  if (s.empty()) return false;
  return std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.';
  });
}

// Position of `part` inside `line`, 1-based.
std::size_t column_of(std::string_view line, std::string_view part) {
  return static_cast<std::size_t>(part.data() - line.data()) + 1;
}

struct Item {
  std::string_view text;
  std::size_t column;
};

std::vector<Item> split_list(std::string_view line, std::string_view value) {
  std::vector<Item> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= value.size(); ++i) {
    if (i < value.size() && value[i] != ',') continue;
    std::string_view part = value.substr(start, i - start);
    std::string_view t = trim(part);
    out.push_back({t, t.empty() ? column_of(line, part) : column_of(line, t)});
    start = i + 1;
  }
  return out;
}

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  SystemFile run() {
    std::size_t pos = 0;
    bool header = false;
    while (pos <= text_.size()) {
      std::size_t end = text_.find('\n', pos);
      if (end == std::string_view::npos) end = text_.size();
      std::string_view raw = text_.substr(pos, end - pos);
      if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);
      ++line_no_;
      line_ = raw;
      std::string_view t = trim(raw);
      if (!header) {
        if (t.empty()) {
          pos = end + 1;
          continue;
        }
        if (t != kSystemFileTag) fail("expected header '" + std::string(kSystemFileTag) + "'", t);
        header = true;
      } else if (!t.empty() && t.front() != '#') {
        line(t);
      }
      if (end == text_.size()) break;
      pos = end + 1;
    }
    if (!header) throw ParseError("missing header", 1, 1);
    finish_section();
    return std::move(out_);
  }

 private:
  enum class Section { none, settings, system, point };

  [[noreturn]] void fail(const std::string& what, std::string_view at) const {
    throw ParseError(what, line_no_, column_of(line_, at));
  }

  void line(std::string_view t) {
    if (t.front() == '[') {
      if (t.back() != ']') fail("unterminated section header", t);
      finish_section();
      std::string_view inner = trim(t.substr(1, t.size() - 2));
      std::size_t sp = inner.find(' ');
      std::string_view kind = inner.substr(0, sp);
      std::string_view name = sp == std::string_view::npos ? "" : trim(inner.substr(sp));
      section_line_ = line_no_;
      keys_.clear();
      if (kind == "settings") {
        if (!name.empty()) fail("settings section takes no name", name);
        if (seen_settings_) fail("duplicate settings section", kind);
        seen_settings_ = true;
        section_ = Section::settings;
        return;
      }
      if (kind != "system" && kind != "point") fail("unknown section '" + std::string(kind) + "'", kind);
      if (!valid_name(name)) fail("invalid or missing name", name.empty() ? kind : name);
      if (names_.count(std::string(kind) + ":" + std::string(name)))
        fail("duplicate " + std::string(kind) + " '" + std::string(name) + "'", name);
      names_.insert({std::string(kind) + ":" + std::string(name), line_no_});
      section_ = kind == "system" ? Section::system : Section::point;
      name_ = std::string(name);
      vars_.reset();
      t_.reset();
      entries_.clear();
      f0_.reset();
      coords_.reset();
      return;
    }
    std::size_t eq = t.find('=');
    if (eq == std::string_view::npos) fail("expected 'key = value'", t);
    std::string_view key = trim(t.substr(0, eq));
    std::string_view value = trim(t.substr(eq + 1));
    if (key.empty()) fail("missing key", t);
    if (value.empty()) fail("missing value", t.substr(eq));
    if (section_ == Section::none) fail("key outside of a section", key);
    if (!keys_.insert(std::string(key)).second) fail("duplicate key '" + std::string(key) + "'", key);
    switch (section_) {
      case Section::settings: setting(key, value); break;
      case Section::system: system_key(key, value); break;
      case Section::point: point_key(key, value); break;
      case Section::none: break;
    }
  }

  long integer(std::string_view value, long min) const {
    long v = 0;
    std::string s(value);
    std::size_t used = 0;
    try {
      v = std::stol(s, &used);
    } catch (const std::exception&) {
      fail("expected an integer", value);
    }
    if (used != s.size()) fail("expected an integer", value);
    if (v < min) fail("value must be at least " + std::to_string(min), value);
    return v;
  }

  void setting(std::string_view key, std::string_view value) {
    Settings& s = out_.settings;
    if (key == "prec") s.prec = integer(value, 16);
    else if (key == "digits") s.digits = integer(value, 1);
    else if (key == "order") s.order = integer(value, 1);
    else if (key == "k") s.k = integer(value, 0);
    else if (key == "k_max") s.k_max = integer(value, 0);
    else if (key == "degree") s.degree = integer(value, 1);
    else if (key == "d_max") s.d_max = integer(value, 0);
    else if (key == "bound") {
      integer(value, 1);
      s.bound = std::string(value);
    } else {
      fail("unknown setting '" + std::string(key) + "'", key);
    }
  }

  std::vector<BigRational> rationals(std::string_view value) const {
    std::vector<BigRational> out;
    for (const auto& item : split_list(line_, value)) {
      if (item.text.empty()) throw ParseError("empty list entry", line_no_, item.column);
      try {
        out.push_back(parse_rational(item.text));
      } catch (const Error&) {
        throw ParseError("expected a rational number", line_no_, item.column);
      }
    }
    return out;
  }

  void system_key(std::string_view key, std::string_view value) {
    if (key == "vars") {
      std::vector<std::string> vars;
      for (const auto& item : split_list(line_, value)) {
        if (!valid_name(item.text) || std::isdigit(static_cast<unsigned char>(item.text.front())))
          throw ParseError("invalid variable name", line_no_, item.column);
        vars.emplace_back(item.text);
      }
      vars_ = vars;
      vars_line_ = line_no_;
    } else if (key == "T") {
      t_ = matrix_literal(value);
      t_line_ = line_no_;
      t_line_text_ = std::string(line_);
    } else if (key == "f0") {
      f0_ = rationals(value);
      f0_line_ = line_no_;
    } else if (key.size() > 1 && key[0] == 'A') {
      std::size_t i = 0, j = 0;
      if (!index_pair(key.substr(1), i, j)) fail("expected A[i][j]", key);
      if (!vars_) fail("A entries must follow 'vars'", key);
      try {
        entries_.push_back({i, j, parse_ratfunc(value, *vars_, line_no_, column_of(line_, value)),
                            line_no_, column_of(line_, key)});
      } catch (const ParseError&) {
        throw;
      } catch (const Error& e) {
        fail(e.what(), value);
      }
    } else {
      fail("unknown system key '" + std::string(key) + "'", key);
    }
  }

  static bool index_pair(std::string_view s, std::size_t& i, std::size_t& j) {
    auto read = [&](std::size_t& out) {
      if (s.empty() || s.front() != '[') return false;
      std::size_t close = s.find(']');
      if (close == std::string_view::npos || close == 1) return false;
      std::string_view digits = s.substr(1, close - 1);
      if (!std::all_of(digits.begin(), digits.end(),
                       [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
        return false;
      if (digits.size() > 6) return false;
      out = std::stoul(std::string(digits));
      s.remove_prefix(close + 1);
      return true;
    };
    return read(i) && read(j) && s.empty();
  }

  // [[a,b],[c,d]] with non-negative integer entries; rows must have equal length.
  IntMatrix matrix_literal(std::string_view value) {
    std::size_t p = 0;
    auto skip = [&] {
      while (p < value.size() && std::isspace(static_cast<unsigned char>(value[p]))) ++p;
    };
    auto expect = [&](char c) {
      skip();
      if (p >= value.size() || value[p] != c)
        fail(std::string("expected '") + c + "'", p < value.size() ? value.substr(p) : value.substr(value.size()));
      ++p;
    };
    std::vector<std::vector<BigInt>> rows;
    std::vector<std::size_t> row_columns;
    expect('[');
    while (true) {
      skip();
      row_columns.push_back(column_of(line_, value.substr(p)));
      expect('[');
      std::vector<BigInt> row;
      while (true) {
        skip();
        std::size_t start = p;
        while (p < value.size() && std::isdigit(static_cast<unsigned char>(value[p]))) ++p;
        if (start == p) fail("expected a non-negative integer", value.substr(start));
        row.emplace_back(std::string(value.substr(start, p - start)));
        skip();
        if (p < value.size() && value[p] == ',') {
          ++p;
          continue;
        }
        expect(']');
        break;
      }
      rows.push_back(std::move(row));
      skip();
      if (p < value.size() && value[p] == ',') {
        ++p;
        continue;
      }
      expect(']');
      break;
    }
    skip();
    if (p != value.size()) fail("trailing characters", value.substr(p));
    const std::size_t n = rows.size();
    std::vector<BigInt> data;
    for (std::size_t r = 0; r < n; ++r) {
      if (rows[r].size() != n)
        throw ParseError("dimension error: T row " + std::to_string(r) + " has " +
                             std::to_string(rows[r].size()) + " entries, expected " +
                             std::to_string(n),
                         line_no_, row_columns[r]);
      data.insert(data.end(), rows[r].begin(), rows[r].end());
    }
    return IntMatrix(n, n, std::move(data));
  }

  void point_key(std::string_view key, std::string_view value) {
    if (key != "coords") fail("unknown point key '" + std::string(key) + "'", key);
    coords_ = rationals(value);
    for (std::size_t i = 0; i < coords_->size(); ++i)
      if ((*coords_)[i] == 0) fail("point coordinates must be nonzero", value);
  }

  void finish_section() {
    if (section_ == Section::system) finish_system();
    if (section_ == Section::point) {
      if (!coords_) throw ParseError("point '" + name_ + "' has no coords", section_line_, 1);
      out_.points.push_back({name_, RationalPoint(*coords_), section_line_});
    }
    section_ = Section::none;
  }

  void finish_system() {
    if (!vars_) throw ParseError("system '" + name_ + "' has no vars", section_line_, 1);
    if (!t_) throw ParseError("system '" + name_ + "' has no T", section_line_, 1);
    if (t_->rows() != vars_->size())
      throw ParseError("dimension error: T is " + std::to_string(t_->rows()) + "x" +
                           std::to_string(t_->rows()) + " but there are " +
                           std::to_string(vars_->size()) + " variables",
                       t_line_, 1);
    std::size_t m = f0_ ? f0_->size() : 0;
    for (const auto& e : entries_) m = std::max({m, e.i + 1, e.j + 1});
    if (m == 0) throw ParseError("system '" + name_ + "' has no A entries", section_line_, 1);
    for (const auto& e : entries_)
      if (f0_ && (e.i >= f0_->size() || e.j >= f0_->size()))
        throw ParseError("dimension error: A index outside the size given by f0", e.line, e.column);
    if (f0_ && f0_->size() != m)
      throw ParseError("dimension error: f0 has " + std::to_string(f0_->size()) +
                           " entries, A is " + std::to_string(m) + "x" + std::to_string(m),
                       f0_line_, 1);
    RFMatrix a(m, m, RatFunc::constant(*vars_, 0));
    std::vector<std::vector<bool>> set(m, std::vector<bool>(m, false));
    for (const auto& e : entries_) {
      if (set[e.i][e.j]) throw ParseError("duplicate A entry", e.line, e.column);
      set[e.i][e.j] = true;
      a(e.i, e.j) = e.f;
    }
    try {
      Transform t(*t_);
      out_.systems.push_back({name_, MahlerSystem(t, a, *vars_), f0_, section_line_});
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      throw ParseError(std::string("invalid system '") + name_ + "': " + e.what(), section_line_, 1);
    }
  }

  struct Entry {
    std::size_t i, j;
    RatFunc f;
    std::size_t line, column;
  };

  std::string_view text_;
  std::string_view line_;
  std::size_t line_no_ = 0;
  SystemFile out_;
  Section section_ = Section::none;
  std::size_t section_line_ = 0;
  bool seen_settings_ = false;
  std::set<std::string> keys_;
  std::map<std::string, std::size_t> names_;
  std::string name_;
  std::optional<std::vector<std::string>> vars_;
  std::size_t vars_line_ = 0;
  std::optional<IntMatrix> t_;
  std::size_t t_line_ = 0;
  std::string t_line_text_;
  std::vector<Entry> entries_;
  std::optional<std::vector<BigRational>> f0_;
  std::size_t f0_line_ = 0;
  std::optional<std::vector<BigRational>> coords_;
};

std::string join_rationals(const std::vector<BigRational>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + to_string(v[i]);
  return s;
}

}  // namespace

const SystemDef& SystemFile::system(const std::string& name) const {
  for (const auto& s : systems)
    if (s.name == name) return s;
  throw DomainError("undefined system '" + name + "'");
}

const PointDef& SystemFile::point(const std::string& name) const {
  for (const auto& p : points)
    if (p.name == name) return p;
  throw DomainError("undefined point '" + name + "'");
}

SystemFile parse_system_file(std::string_view text) { return Parser(text).run(); }

std::string print_system_section(const std::string& name, const MahlerSystem& sys,
                                 const std::optional<std::vector<BigRational>>& f0) {
  std::ostringstream os;
  os << "[system " << name << "]\n";
  os << "vars = ";
  for (std::size_t i = 0; i < sys.nvars(); ++i) os << (i ? ", " : "") << sys.variables()[i];
  os << "\nT = [";
  const IntMatrix& t = sys.transform().matrix();
  for (std::size_t i = 0; i < t.rows(); ++i) {
    os << (i ? ", [" : "[");
    for (std::size_t j = 0; j < t.cols(); ++j) os << (j ? ", " : "") << t(i, j).get_str();
    os << "]";
  }
  os << "]\n";
  for (std::size_t i = 0; i < sys.size(); ++i)
    for (std::size_t j = 0; j < sys.size(); ++j)
      os << "A[" << i << "][" << j << "] = " << sys.matrix()(i, j).to_string() << "\n";
  if (f0) os << "f0 = " << join_rationals(*f0) << "\n";
  return os.str();
}

std::string print_system_file(const SystemFile& f) {
  std::ostringstream os;
  const Settings& s = f.settings;
  os << kSystemFileTag << "\n\n[settings]\n"
     << "prec = " << s.prec << "\ndigits = " << s.digits << "\norder = " << s.order
     << "\nk = " << s.k << "\nk_max = " << s.k_max << "\ndegree = " << s.degree
     << "\nd_max = " << s.d_max << "\nbound = " << s.bound << "\n";
  for (const auto& sys : f.systems) os << "\n" << print_system_section(sys.name, sys.system, sys.f0);
  for (const auto& p : f.points)
    os << "\n[point " << p.name << "]\ncoords = " << join_rationals(p.point.coords()) << "\n";
  return os.str();
}

bool same_structure(const SystemFile& a, const SystemFile& b) {
  if (!(a.settings == b.settings) || a.systems.size() != b.systems.size() ||
      a.points.size() != b.points.size())
    return false;
  for (std::size_t i = 0; i < a.systems.size(); ++i) {
    const auto& x = a.systems[i];
    const auto& y = b.systems[i];
    if (x.name != y.name || x.f0 != y.f0 || x.system.variables() != y.system.variables() ||
        !(x.system.transform().matrix() == y.system.transform().matrix()) ||
        !(x.system.matrix() == y.system.matrix()))
      return false;
  }
  for (std::size_t i = 0; i < a.points.size(); ++i)
    if (a.points[i].name != b.points[i].name || !(a.points[i].point == b.points[i].point))
      return false;
  return true;
}

}  // namespace mahler

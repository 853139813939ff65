#include "tdsnn/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <optional>
#include <set>
#include <sstream>
#include <variant>
#include <vector>

#include "tdsnn/errors.hpp"

namespace tdsnn {
namespace {

struct Value {
  enum class Kind { number, boolean, string, array } kind = Kind::number;
  std::string text;  // raw number text or decoded string
  bool flag = false;
  std::vector<std::string> items;
};

const char* kind_name(Value::Kind k) {
  switch (k) {
    case Value::Kind::number: return "a number";
    case Value::Kind::boolean: return "true/false";
    case Value::Kind::string: return "a string";
    case Value::Kind::array: return "an array";
  }
  return "?";
}

// Errors raised while converting a value; the caller adds line/key context.
struct ValueError {
  std::string message;
};

void expect(const Value& v, Value::Kind kind) {
  if (v.kind != kind) {
    throw ValueError{std::string("expected ") + kind_name(kind) + ", got " + kind_name(v.kind)};
  }
}

template <class T>
T parse_number(const Value& v) {
  expect(v, Value::Kind::number);
  T out{};
  const char* first = v.text.data();
  const char* last = first + v.text.size();
  if (*first == '+') ++first;
  const auto [end, ec] = std::from_chars(first, last, out);
  if (ec == std::errc::result_out_of_range) throw ValueError{"'" + v.text + "' is out of range"};
  if (ec != std::errc() || end != last) {
    throw ValueError{"'" + v.text + "' is not " +
                     (std::is_floating_point_v<T> ? "a number" : "an integer")};
  }
  return out;
}

template <class T>
std::string format_number(T x) {
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, end);
}

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + '"';
}

// Mutable view handed to setters; topology keys are collected here and
// resolved once the whole text has been read.
struct Draft {
  RunConfig config;
  std::optional<std::string> mode;
  RandomTopology random;
  bool random_keys = false;
  std::optional<std::vector<Connection>> connections;
};

struct Field {
  std::string section;
  std::string key;
  std::function<void(Draft&, const Value&)> set;
  std::function<std::string(const RunConfig&)> get;  // empty: serialized by hand
};

template <class T, class Access>
Field number_field(std::string section, std::string key, Access access) {
  return {std::move(section), std::move(key),
          [access](Draft& d, const Value& v) { access(d.config) = parse_number<T>(v); },
          [access](const RunConfig& c) {
            return format_number(access(c));
          }};
}

template <class Access>
Field bool_field(std::string section, std::string key, Access access) {
  return {std::move(section), std::move(key),
          [access](Draft& d, const Value& v) {
            expect(v, Value::Kind::boolean);
            access(d.config) = v.flag;
          },
          [access](const RunConfig& c) {
            return std::string(access(c) ? "true" : "false");
          }};
}

Connection parse_connection(const std::string& s) {
  // pre>post:exc|inh:code
  const auto gt = s.find('>');
  const auto c1 = s.find(':');
  const auto c2 = s.find(':', c1 == std::string::npos ? c1 : c1 + 1);
  if (gt == std::string::npos || c1 == std::string::npos || c2 == std::string::npos ||
      gt > c1) {
    throw ValueError{"connection '" + s + "' is not of the form pre>post:exc|inh:code"};
  }
  auto integer = [&](std::string_view part) {
    long long x = -1;
    const auto [end, ec] = std::from_chars(part.data(), part.data() + part.size(), x);
    if (ec != std::errc() || end != part.data() + part.size() || x < 0) {
      throw ValueError{"connection '" + s + "': '" + std::string(part) +
                       "' is not a non-negative integer"};
    }
    return x;
  };
  const std::string_view sv(s);
  Connection c;
  c.pre = static_cast<std::size_t>(integer(sv.substr(0, gt)));
  c.post = static_cast<std::size_t>(integer(sv.substr(gt + 1, c1 - gt - 1)));
  const auto pol = sv.substr(c1 + 1, c2 - c1 - 1);
  if (pol == "exc") {
    c.polarity = Polarity::excitatory;
  } else if (pol == "inh") {
    c.polarity = Polarity::inhibitory;
  } else {
    throw ValueError{"connection '" + s + "': polarity must be exc or inh"};
  }
  const auto code = integer(sv.substr(c2 + 1));
  if (code > WeightCode::kMax) {
    throw ValueError{"connection '" + s + "': weight code must be in [0, 15]"};
  }
  c.code = WeightCode(static_cast<int>(code));
  return c;
}

std::string format_connection(const Connection& c) {
  return std::to_string(c.pre) + ">" + std::to_string(c.post) + ":" +
         (c.polarity == Polarity::excitatory ? "exc" : "inh") + ":" +
         std::to_string(c.code.value());
}

const std::vector<Field>& fields() {
  static const std::vector<Field> table = [] {
    std::vector<Field> f;
    // clang-format off
    f.push_back(number_field<std::size_t>("network", "n_neurons", [](auto& c) -> auto& { return c.network.n_neurons; }));
    f.push_back(number_field<std::uint64_t>("network", "seed", [](auto& c) -> auto& { return c.network.rng_seed; }));
    f.push_back(number_field<double>("network", "dt", [](auto& c) -> auto& { return c.network.dt; }));
    f.push_back(number_field<double>("network", "trace_interval", [](auto& c) -> auto& { return c.network.trace_interval; }));

    f.push_back({"topology", "mode", [](Draft& d, const Value& v) {
      expect(v, Value::Kind::string);
      if (v.text != "random" && v.text != "explicit") throw ValueError{"mode must be \"random\" or \"explicit\""};
      d.mode = v.text;
    }, {}});
    f.push_back({"topology", "p", [](Draft& d, const Value& v) { d.random.p = parse_number<double>(v); d.random_keys = true; }, {}});
    f.push_back({"topology", "exc_fraction", [](Draft& d, const Value& v) { d.random.exc_fraction = parse_number<double>(v); d.random_keys = true; }, {}});
    f.push_back({"topology", "code_min", [](Draft& d, const Value& v) { d.random.code_min = parse_number<int>(v); d.random_keys = true; }, {}});
    f.push_back({"topology", "code_max", [](Draft& d, const Value& v) { d.random.code_max = parse_number<int>(v); d.random_keys = true; }, {}});
    f.push_back({"topology", "connections", [](Draft& d, const Value& v) {
      expect(v, Value::Kind::array);
      std::vector<Connection> list;
      for (const auto& item : v.items) list.push_back(parse_connection(item));
      d.connections = std::move(list);
    }, {}});

    f.push_back(number_field<double>("neuron", "v_th", [](auto& c) -> auto& { return c.network.neuron.v_th; }));
    f.push_back(number_field<double>("neuron", "r_base", [](auto& c) -> auto& { return c.network.neuron.r_base; }));
    f.push_back(number_field<double>("neuron", "r_exc", [](auto& c) -> auto& { return c.network.neuron.r_exc; }));
    f.push_back(number_field<double>("neuron", "r_inh", [](auto& c) -> auto& { return c.network.neuron.r_inh; }));
    f.push_back(number_field<double>("neuron", "spike_width", [](auto& c) -> auto& { return c.network.neuron.spike_width; }));

    f.push_back(number_field<double>("synapse", "delta_up", [](auto& c) -> auto& { return c.network.synapse.delta_up; }));
    f.push_back(number_field<double>("synapse", "tau_leak", [](auto& c) -> auto& { return c.network.synapse.tau_leak; }));
    f.push_back(number_field<double>("synapse", "v_osc", [](auto& c) -> auto& { return c.network.synapse.v_osc; }));
    f.push_back(number_field<double>("synapse", "v_max", [](auto& c) -> auto& { return c.network.synapse.v_max; }));
    f.push_back(number_field<double>("synapse", "f_min", [](auto& c) -> auto& { return c.network.synapse.f_min; }));
    f.push_back(number_field<double>("synapse", "f_max", [](auto& c) -> auto& { return c.network.synapse.f_max; }));
    f.push_back({"synapse", "sub_onset", [](Draft& d, const Value& v) {
      expect(v, Value::Kind::string);
      if (v.text == "freeze") d.config.network.synapse.sub_onset = SubOnsetPhase::freeze;
      else if (v.text == "reset") d.config.network.synapse.sub_onset = SubOnsetPhase::reset;
      else throw ValueError{"sub_onset must be \"freeze\" or \"reset\""};
    }, [](const RunConfig& c) {
      return quote(c.network.synapse.sub_onset == SubOnsetPhase::freeze ? "freeze" : "reset");
    }});

    f.push_back(number_field<double>("weight", "tau_unit", [](auto& c) -> auto& { return c.network.weight.tau_unit; }));
    f.push_back(number_field<double>("weight", "w0", [](auto& c) -> auto& { return c.network.weight.w0; }));

    f.push_back(number_field<double>("train", "frequency", [](auto& c) -> auto& { return c.train.target.frequency; }));
    f.push_back(number_field<double>("train", "amplitude", [](auto& c) -> auto& { return c.train.target.amplitude; }));
    f.push_back(number_field<int>("train", "washout_periods", [](auto& c) -> auto& { return c.train.washout_periods; }));
    f.push_back(number_field<int>("train", "train_periods", [](auto& c) -> auto& { return c.train.train_periods; }));
    f.push_back(number_field<int>("train", "test_periods", [](auto& c) -> auto& { return c.train.test_periods; }));
    f.push_back(number_field<double>("train", "learn_interval", [](auto& c) -> auto& { return c.train.learn_interval; }));
    f.push_back(number_field<double>("train", "rls_init_alpha", [](auto& c) -> auto& { return c.train.rls_init_alpha; }));
    f.push_back(bool_field("train", "teacher_forcing", [](auto& c) -> auto& { return c.train.teacher_forcing; }));
    f.push_back(number_field<double>("train", "feedback_crossed_fraction", [](auto& c) -> auto& { return c.train.feedback_crossed_fraction; }));
    f.push_back(number_field<std::uint64_t>("train", "feedback_seed", [](auto& c) -> auto& { return c.train.feedback_seed; }));
    f.push_back({"train", "readout_source", [](Draft& d, const Value& v) {
      expect(v, Value::Kind::string);
      if (v.text == "edge_interval") d.config.train.readout_source = ReadoutSource::edge_interval;
      else if (v.text == "edge_rate") d.config.train.readout_source = ReadoutSource::edge_rate;
      else if (v.text == "vsyn") d.config.train.readout_source = ReadoutSource::vsyn;
      else throw ValueError{"readout_source must be \"edge_interval\", \"edge_rate\" or \"vsyn\""};
    }, [](const RunConfig& c) {
      switch (c.train.readout_source) {
        case ReadoutSource::edge_interval: return quote("edge_interval");
        case ReadoutSource::edge_rate: return quote("edge_rate");
        case ReadoutSource::vsyn: break;
      }
      return quote("vsyn");
    }});
    f.push_back(number_field<double>("train", "readout_tau", [](auto& c) -> auto& { return c.train.readout_tau; }));
    f.push_back(number_field<std::uint64_t>("train", "readout_seed", [](auto& c) -> auto& { return c.train.readout_seed; }));

    f.push_back(number_field<double>("feedback", "gain", [](auto& c) -> auto& { return c.feedback.gain; }));
    f.push_back(number_field<double>("feedback", "f_fb_max", [](auto& c) -> auto& { return c.feedback.f_fb_max; }));
    f.push_back(number_field<double>("feedback", "pulse_width", [](auto& c) -> auto& { return c.feedback.pulse_width; }));
    // clang-format on
    return f;
  }();
  return table;
}

const char* const kSections[] = {"network", "topology", "neuron", "synapse",
                                 "weight",  "train",    "feedback"};

class Parser {
public:
  explicit Parser(std::string_view text) : text_(text) {}

  [[noreturn]] void fail(const std::string& message) const {
    throw ConfigError("config line " + std::to_string(line_) + ": " + message);
  }

  bool next_line(std::string& out) {
    if (pos_ >= text_.size()) return false;
    const auto nl = text_.find('\n', pos_);
    const auto end = nl == std::string_view::npos ? text_.size() : nl;
    out.assign(text_.substr(pos_, end - pos_));
    if (!out.empty() && out.back() == '\r') out.pop_back();
    pos_ = end + 1;
    ++line_;
    return true;
  }

  int line() const { return line_; }

private:
  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 0;
};

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

// Drops a trailing comment, honouring quotes. Returns false on an
// unterminated string.
bool strip_comment(std::string& s) {
  bool in_string = false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const char c = s[i];
    if (in_string) {
      if (c == '\\') ++i;
      else if (c == '"') in_string = false;
    } else if (c == '"') {
      in_string = true;
    } else if (c == '#') {
      s.resize(i);
      break;
    }
  }
  return !in_string;
}

// Reads one scalar starting at s[i]; advances i past it.
Value read_scalar(std::string_view s, std::size_t& i) {
  Value v;
  if (s[i] == '"') {
    v.kind = Value::Kind::string;
    for (++i; i < s.size() && s[i] != '"'; ++i) {
      if (s[i] == '\\') {
        if (++i >= s.size()) break;
      }
      v.text += s[i];
    }
    if (i >= s.size()) throw ValueError{"unterminated string"};
    ++i;
    return v;
  }
  const auto end = s.find_first_of(",] \t", i);
  const auto word = s.substr(i, end == std::string_view::npos ? s.size() - i : end - i);
  i += word.size();
  if (word.empty()) throw ValueError{"missing value"};
  if (word == "true" || word == "false") {
    v.kind = Value::Kind::boolean;
    v.flag = word == "true";
  } else {
    v.kind = Value::Kind::number;
    v.text = std::string(word);
  }
  return v;
}

Value read_value(std::string_view s) {
  std::size_t i = 0;
  if (s.empty()) throw ValueError{"missing value"};
  if (s[0] != '[') {
    Value v = read_scalar(s, i);
    if (!trim(s.substr(i)).empty()) throw ValueError{"unexpected text after value"};
    return v;
  }
  Value v;
  v.kind = Value::Kind::array;
  ++i;
  auto skip_ws = [&] {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\n')) ++i;
  };
  skip_ws();
  while (i < s.size() && s[i] != ']') {
    const Value item = read_scalar(s, i);
    if (item.kind != Value::Kind::string) throw ValueError{"array items must be strings"};
    v.items.push_back(item.text);
    skip_ws();
    if (i < s.size() && s[i] == ',') {
      ++i;
      skip_ws();
    } else if (i < s.size() && s[i] != ']') {
      throw ValueError{"expected ',' or ']' in array"};
    }
  }
  if (i >= s.size()) throw ValueError{"unterminated array"};
  if (!trim(s.substr(i + 1)).empty()) throw ValueError{"unexpected text after array"};
  return v;
}

bool bracket_open(std::string_view s) {
  bool in_string = false;
  int depth = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (in_string) {
      if (s[i] == '\\') ++i;
      else if (s[i] == '"') in_string = false;
    } else if (s[i] == '"') {
      in_string = true;
    } else if (s[i] == '[') {
      ++depth;
    } else if (s[i] == ']') {
      --depth;
    }
  }
  return depth > 0;
}

}  // namespace

void RunConfig::validate() const {
  try {
    network.validate();
    train.validate(network.dt);
    feedback.validate();
  } catch (const InvalidArgument& e) {
    throw ConfigError(std::string("config: ") + e.what());
  } catch (const ConfigError& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

RunConfig parse_config(std::string_view text, const RunConfig& defaults) {
  Draft draft;
  draft.config = defaults;
  if (const auto* r = std::get_if<RandomTopology>(&defaults.network.connections)) draft.random = *r;

  Parser parser(text);
  std::string section;
  std::set<std::string> seen;
  std::string line;
  while (parser.next_line(line)) {
    if (!strip_comment(line)) parser.fail("unterminated string");
    std::string_view body = trim(line);
    if (body.empty()) continue;

    if (body.front() == '[' && body.find('=') == std::string_view::npos) {
      if (body.back() != ']') parser.fail("malformed section header");
      section = std::string(trim(body.substr(1, body.size() - 2)));
      if (std::find(std::begin(kSections), std::end(kSections), section) == std::end(kSections)) {
        parser.fail("unknown section [" + section + "]");
      }
      continue;
    }

    const auto eq = body.find('=');
    if (eq == std::string_view::npos) parser.fail("expected 'key = value'");
    const std::string key(trim(body.substr(0, eq)));
    if (key.empty()) parser.fail("missing key before '='");
    const int key_line = parser.line();
    std::string value_text(trim(body.substr(eq + 1)));
    while (bracket_open(value_text)) {
      std::string more;
      if (!parser.next_line(more)) parser.fail("key '" + key + "': unterminated array");
      if (!strip_comment(more)) parser.fail("unterminated string");
      value_text += '\n';
      value_text += trim(more);
    }

    const auto context = [&] {
      return "config line " + std::to_string(key_line) + ": key '" + key + "'" +
             (section.empty() ? "" : " in [" + section + "]") + ": ";
    };
    if (section.empty()) throw ConfigError(context() + "appears before any section");
    const auto& table = fields();
    const auto field = std::find_if(table.begin(), table.end(), [&](const Field& f) {
      return f.section == section && f.key == key;
    });
    if (field == table.end()) throw ConfigError(context() + "unknown key");
    if (!seen.insert(section + "." + key).second) throw ConfigError(context() + "duplicate key");
    try {
      field->set(draft, read_value(value_text));
    } catch (const ValueError& e) {
      throw ConfigError(context() + e.message);
    }
  }

  // Resolve the topology.
  const bool explicit_mode =
      draft.mode ? *draft.mode == "explicit"
                 : (draft.connections.has_value() ||
                    (!draft.random_keys &&
                     std::holds_alternative<std::vector<Connection>>(defaults.network.connections)));
  if (explicit_mode) {
    if (draft.random_keys) {
      throw ConfigError("config: [topology] p/exc_fraction/code_min/code_max need mode = \"random\"");
    }
    draft.config.network.connections =
        draft.connections ? *draft.connections
                          : std::get_if<std::vector<Connection>>(&defaults.network.connections)
                                ? std::get<std::vector<Connection>>(defaults.network.connections)
                                : std::vector<Connection>{};
  } else {
    if (draft.connections) {
      throw ConfigError("config: [topology] connections need mode = \"explicit\"");
    }
    draft.config.network.connections = draft.random;
  }

  draft.config.validate();
  return draft.config;
}

RunConfig load_config(const std::filesystem::path& path, const RunConfig& defaults) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read config file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  if (in.bad()) throw IoError("error while reading config file " + path.string());
  try {
    return parse_config(text.str(), defaults);
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

std::string serialize_config(const RunConfig& config) {
  std::string out;
  for (const char* section : kSections) {
    if (!out.empty()) out += '\n';
    out += "[" + std::string(section) + "]\n";
    if (std::string_view(section) == "topology") {
      const auto& spec = config.network.connections;
      if (const auto* r = std::get_if<RandomTopology>(&spec)) {
        out += "mode = \"random\"\n";
        out += "p = " + format_number(r->p) + "\n";
        out += "exc_fraction = " + format_number(r->exc_fraction) + "\n";
        out += "code_min = " + std::to_string(r->code_min) + "\n";
        out += "code_max = " + std::to_string(r->code_max) + "\n";
      } else {
        out += "mode = \"explicit\"\nconnections = [";
        const auto& list = std::get<std::vector<Connection>>(spec);
        for (std::size_t i = 0; i < list.size(); ++i) {
          out += (i == 0 ? "\n  " : ",\n  ") + quote(format_connection(list[i]));
        }
        out += list.empty() ? "]\n" : "\n]\n";
      }
      continue;
    }
    for (const auto& f : fields()) {
      if (f.section == section) out += f.key + " = " + f.get(config) + "\n";
    }
  }
  return out;
}

RunConfig reservoir_preset() {
  RunConfig c;
  c.network.n_neurons = 100;
  c.network.rng_seed = 42;
  RandomTopology topo;
  topo.p = 0.03;
  topo.exc_fraction = 0.5;
  c.network.connections = topo;
  c.train.learn_interval = 0.5e-3;
  // A stiffer prior keeps early RLS steps from chasing the first period.
  c.train.rls_init_alpha = 30.0;
  c.train.feedback_crossed_fraction = 0.5;
  c.train.readout_source = ReadoutSource::edge_interval;
  // Gain above f_fb_max / amplitude saturates the encoder near the peaks; the
  // wide pulses make each feedback event a strong kick. Without both the loop
  // decays to silence once the teacher is removed.
  c.feedback.gain = 320.0;
  c.feedback.pulse_width = 3e-3;
  return c;
}

}  // namespace tdsnn

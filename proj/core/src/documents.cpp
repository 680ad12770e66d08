#include "secbc/documents.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "secbc/errors.hpp"

namespace secbc {

namespace {

using json = nlohmann::ordered_json;

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot read '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
}

const json& require(const json& j, const char* field) {
  if (!j.is_object() || !j.contains(field))
    throw ParseError(std::string("missing required field '") + field + "'");
  return j.at(field);
}

double as_number(const json& j, const char* context) {
  if (!j.is_number()) throw ParseError(std::string(context) + " must be a number");
  return j.get<double>();
}

long long as_integer(const json& j, const char* context) {
  if (!j.is_number_integer())
    throw ParseError(std::string(context) + " must be an integer");
  return j.get<long long>();
}

DiscreteChannel parse_matrix(const json& j, const std::string& context) {
  if (!j.is_array() || j.empty())
    throw ParseError(context + " must be a nonempty array of rows");
  const std::size_t rows = j.size();
  std::size_t cols = 0;
  std::vector<double> data;
  for (std::size_t r = 0; r < rows; ++r) {
    const json& row = j.at(r);
    if (!row.is_array() || row.empty())
      throw ParseError(context + " row " + std::to_string(r) +
                       " must be a nonempty array");
    if (r == 0) {
      cols = row.size();
    } else if (row.size() != cols) {
      throw ParseError(context + " row " + std::to_string(r) + " has " +
                       std::to_string(row.size()) + " entries, row 0 has " +
                       std::to_string(cols));
    }
    for (std::size_t c = 0; c < cols; ++c)
      data.push_back(as_number(row.at(c), (context + " entry").c_str()));
  }
  return DiscreteChannel(static_cast<int>(rows), static_cast<int>(cols),
                         std::move(data));
}

json render_matrix(const DiscreteChannel& ch) {
  json rows = json::array();
  for (int i = 0; i < ch.input_size(); ++i) {
    json row = json::array();
    for (double v : ch.row(i)) row.push_back(v);
    rows.push_back(std::move(row));
  }
  return rows;
}

ChainDistribution parse_chain(const json& j) {
  const json& stages_json = require(j, "stages");
  if (!stages_json.is_array() || stages_json.empty())
    throw ParseError("chain stages must be a nonempty array of matrices");
  std::vector<DiscreteChannel> stages;
  for (std::size_t i = 0; i < stages_json.size(); ++i)
    stages.push_back(
        parse_matrix(stages_json.at(i), "chain stage " + std::to_string(i)));
  const int k = static_cast<int>(stages.size());
  return ChainDistribution(k, std::move(stages));
}

MessageSubset parse_subset_token(const std::string& token) {
  const auto comma = token.find(',');
  try {
    if (comma == std::string::npos) {
      return MessageSubset::single(std::stoi(token));
    }
    const int lo = std::stoi(token.substr(0, comma));
    const int hi = std::stoi(token.substr(comma + 1));
    if (hi != lo + 1)
      throw ValidationError("subset '" + token +
                            "' is not an adjacent pair; only single receivers, "
                            "adjacent pairs and 'sum' are supported");
    return MessageSubset::adjacent_pair(lo);
  } catch (const std::invalid_argument&) {
    throw ParseError("cannot parse subset token '" + token + "'");
  } catch (const std::out_of_range&) {
    throw ParseError("subset token '" + token + "' out of range");
  }
}

std::vector<MessageSubset> parse_subsets(const json& j, int k) {
  std::vector<MessageSubset> out;
  if (!j.is_array()) throw ParseError("subsets must be an array of tokens");
  for (const auto& item : j) {
    if (!item.is_string()) throw ParseError("subset tokens must be strings");
    const std::string token = item.get<std::string>();
    if (token == "each") {
      for (int i = 1; i <= k; ++i) out.push_back(MessageSubset::single(i));
    } else if (token == "pairs") {
      for (int i = 1; i < k; ++i) out.push_back(MessageSubset::adjacent_pair(i));
    } else if (token == "sum") {
      out.push_back(MessageSubset::full());
    } else {
      out.push_back(parse_subset_token(token));
    }
  }
  return out;
}

}  // namespace

ChannelSpecDocument parse_channel_spec(const std::string& json_text) {
  const json j = parse_json(json_text);
  if (!j.is_object()) throw ParseError("channel spec must be a JSON object");
  ChannelSpecDocument doc;
  if (j.contains("name")) {
    if (!j.at("name").is_string()) throw ParseError("name must be a string");
    doc.name = j.at("name").get<std::string>();
  }
  if (j.contains("description")) {
    if (!j.at("description").is_string())
      throw ParseError("description must be a string");
    doc.description = j.at("description").get<std::string>();
  }
  const long long k = as_integer(require(j, "k_receivers"), "k_receivers");
  doc.spec.k_receivers = static_cast<int>(k);
  doc.spec.base = parse_matrix(require(j, "base"), "base");
  const json& kernels = require(j, "kernels");
  if (!kernels.is_array()) throw ParseError("kernels must be an array of matrices");
  for (std::size_t i = 0; i < kernels.size(); ++i)
    doc.spec.kernels.push_back(
        parse_matrix(kernels.at(i), "kernel " + std::to_string(i + 1)));
  return doc;
}

ChannelSpecDocument load_channel_spec(const std::filesystem::path& path) {
  return parse_channel_spec(read_file(path));
}

std::string render_channel_spec(const ChannelSpecDocument& doc) {
  json j;
  if (!doc.name.empty()) j["name"] = doc.name;
  if (!doc.description.empty()) j["description"] = doc.description;
  j["k_receivers"] = doc.spec.k_receivers;
  j["base"] = render_matrix(doc.spec.base);
  json kernels = json::array();
  for (const auto& k : doc.spec.kernels) kernels.push_back(render_matrix(k));
  j["kernels"] = std::move(kernels);
  return j.dump(2) + "\n";
}

ExperimentDoc parse_experiment(const std::string& json_text) {
  const json j = parse_json(json_text);
  if (!j.is_object()) throw ParseError("experiment must be a JSON object");
  ExperimentDoc doc;

  const json& mode = require(j, "mode");
  if (!mode.is_string()) throw ParseError("mode must be a string");
  const std::string mode_s = mode.get<std::string>();
  if (mode_s == "region") {
    doc.mode = ExperimentDoc::Mode::Region;
  } else if (mode_s == "simulate") {
    doc.mode = ExperimentDoc::Mode::Simulate;
  } else if (mode_s == "equivocation") {
    doc.mode = ExperimentDoc::Mode::Equivocation;
  } else {
    throw ParseError("unknown mode '" + mode_s + "'");
  }

  const json& seed = require(j, "seed");
  if (!seed.is_number_integer() || seed.get<long long>() < 0)
    throw ParseError("seed must be a nonnegative integer");
  doc.seed = seed.get<std::uint64_t>();

  if (j.contains("budget_cap"))
    doc.budget_cap =
        static_cast<std::uint64_t>(as_integer(j.at("budget_cap"), "budget_cap"));
  if (j.contains("out")) {
    if (!j.at("out").is_string()) throw ParseError("out must be a string path");
    doc.out_path = j.at("out").get<std::string>();
  }

  if (doc.mode == ExperimentDoc::Mode::Region) {
    const json& weights = require(j, "weights");
    if (!weights.is_array() || weights.empty())
      throw ParseError("weights must be a nonempty array of weight vectors");
    for (const auto& row : weights) {
      if (!row.is_array() || row.empty())
        throw ParseError("each weight vector must be a nonempty array");
      std::vector<double> w;
      for (const auto& v : row) w.push_back(as_number(v, "weight"));
      doc.weights.push_back(std::move(w));
    }
    if (j.contains("tau")) doc.tau = as_number(j.at("tau"), "tau");
    if (j.contains("optimizer")) {
      const json& opt = j.at("optimizer");
      if (!opt.is_object()) throw ParseError("optimizer must be an object");
      if (opt.contains("cardinalities")) {
        for (const auto& c : opt.at("cardinalities"))
          doc.optimizer.cardinalities.push_back(
              static_cast<int>(as_integer(c, "cardinality")));
      }
      if (opt.contains("restarts"))
        doc.optimizer.restarts = static_cast<int>(as_integer(opt.at("restarts"), "restarts"));
      if (opt.contains("iterations"))
        doc.optimizer.max_iterations =
            static_cast<int>(as_integer(opt.at("iterations"), "iterations"));
      if (opt.contains("tolerance"))
        doc.optimizer.tolerance = as_number(opt.at("tolerance"), "tolerance");
      if (opt.contains("grid_step"))
        doc.optimizer.grid_step = as_number(opt.at("grid_step"), "grid_step");
      if (opt.contains("method")) {
        const std::string m = opt.at("method").get<std::string>();
        if (m == "ascent") {
          doc.optimizer.method = OptimizerOptions::Method::CoordinateAscent;
        } else if (m == "grid") {
          doc.optimizer.method = OptimizerOptions::Method::Grid;
        } else {
          throw ParseError("unknown optimizer method '" + m + "'");
        }
      }
      if (opt.contains("threads"))
        doc.optimizer.threads = static_cast<int>(as_integer(opt.at("threads"), "threads"));
    }
    doc.optimizer.seed = doc.seed;
    return doc;
  }

  // simulate / equivocation share the chain-driven machinery
  doc.chain = parse_chain(require(j, "chain"));
  const int k = doc.chain->k_receivers();

  const json& n_list = require(j, "n_list");
  if (!n_list.is_array() || n_list.empty())
    throw ParseError("n_list must be a nonempty array of blocklengths");
  for (const auto& n : n_list)
    doc.n_list.push_back(static_cast<int>(as_integer(n, "blocklength")));

  if (j.contains("codebooks"))
    doc.codebooks = static_cast<int>(as_integer(j.at("codebooks"), "codebooks"));
  if (j.contains("trials")) doc.trials = as_integer(j.at("trials"), "trials");

  const json& rates = require(j, "rates");
  if (!rates.is_object()) throw ParseError("rates must be an object");
  const std::string rule = require(rates, "rule").get<std::string>();
  if (rule == "explicit") {
    doc.rates.kind = RatesRule::Kind::Explicit;
    for (const auto& v : require(rates, "message"))
      doc.rates.message.push_back(as_number(v, "message rate"));
    for (const auto& v : require(rates, "randomization"))
      doc.rates.randomization.push_back(as_number(v, "randomization rate"));
    if (doc.rates.message.size() != static_cast<std::size_t>(k) ||
        doc.rates.randomization.size() != static_cast<std::size_t>(k))
      throw ParseError("explicit rates must list one entry per receiver");
  } else if (rule == "scaled_bounds") {
    doc.rates.kind = RatesRule::Kind::ScaledBounds;
    doc.rates.scale = as_number(require(rates, "scale"), "scale");
    if (rates.contains("tau")) doc.rates.tau = as_number(rates.at("tau"), "tau");
  } else {
    throw ParseError("unknown rates rule '" + rule + "'");
  }

  if (j.contains("decoder")) {
    const std::string d = j.at("decoder").get<std::string>();
    if (d == "ml") {
      doc.decoder = DecoderKind::MaximumLikelihood;
    } else if (d == "typical") {
      doc.decoder = DecoderKind::Typicality;
    } else {
      throw ParseError("unknown decoder '" + d + "'");
    }
  }
  if (j.contains("epsilon")) doc.epsilon = as_number(j.at("epsilon"), "epsilon");

  const bool has_block = j.contains("equivocation");
  if (doc.mode == ExperimentDoc::Mode::Equivocation || has_block) {
    doc.equivocation.enabled = true;
    const json block = has_block ? j.at("equivocation") : json::object();
    if (block.contains("subsets")) {
      doc.equivocation.subsets = parse_subsets(block.at("subsets"), k);
    } else if (doc.mode == ExperimentDoc::Mode::Equivocation) {
      for (int i = 1; i <= k; ++i)
        doc.equivocation.subsets.push_back(MessageSubset::single(i));
      for (int i = 1; i < k; ++i)
        doc.equivocation.subsets.push_back(MessageSubset::adjacent_pair(i));
      doc.equivocation.subsets.push_back(MessageSubset::full());
    } else {
      for (int i = 1; i <= k; ++i)
        doc.equivocation.subsets.push_back(MessageSubset::single(i));
    }
    if (block.contains("method")) {
      const std::string m = block.at("method").get<std::string>();
      if (m != "exact" && m != "mc")
        throw ParseError("equivocation method must be 'exact' or 'mc'");
      doc.equivocation.method = m;
    }
    if (block.contains("samples"))
      doc.equivocation.samples = as_integer(block.at("samples"), "samples");
    if (block.contains("lambda_trials"))
      doc.equivocation.lambda_trials =
          as_integer(block.at("lambda_trials"), "lambda_trials");
    if (block.contains("enum_budget"))
      doc.equivocation.enum_budget =
          static_cast<std::uint64_t>(as_integer(block.at("enum_budget"), "enum_budget"));
    if (block.contains("tolerance"))
      doc.equivocation.tolerance = as_number(block.at("tolerance"), "tolerance");
  }
  return doc;
}

ExperimentDoc load_experiment(const std::filesystem::path& path) {
  return parse_experiment(read_file(path));
}

}  // namespace secbc

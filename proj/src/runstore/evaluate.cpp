#include "halprobe/runstore/evaluate.hpp"

#include <map>
#include <sstream>
#include <vector>

#include "halprobe/errors.hpp"
#include "halprobe/util/jsonl.hpp"

namespace halprobe::runstore {

namespace {

using metrics::AnnotatedImage;

nlohmann::ordered_json ratio_json(const util::Ratio& ratio) {
  nlohmann::ordered_json doc;
  doc["value"] = ratio.value();
  doc["exact"] = std::to_string(ratio.num) + "/" + std::to_string(ratio.den);
  return doc;
}

std::map<std::string, AnnotatedImage> read_annotations(const std::filesystem::path& path) {
  std::map<std::string, AnnotatedImage> annotations;
  util::for_each_jsonl(path, [&](std::size_t line_no, const nlohmann::json& obj) {
    try {
      AnnotatedImage ann;
      ann.image_id = obj.at("image_id").get<std::string>();
      for (const auto& object : obj.at("gt_objects")) {
        ann.gt_objects.insert(object.get<std::string>());
      }
      if (obj.contains("hallucination_targets")) {
        for (const auto& object : obj.at("hallucination_targets")) {
          ann.hallucination_targets.insert(object.get<std::string>());
        }
      }
      annotations[ann.image_id] = std::move(ann);
    } catch (const nlohmann::json::exception& ex) {
      throw Error(path.string() + ":" + std::to_string(line_no) + ": " + ex.what());
    }
  });
  return annotations;
}

nlohmann::ordered_json prf_json(const metrics::PrfMetrics& m) {
  nlohmann::ordered_json doc;
  doc["accuracy"] = ratio_json(m.accuracy);
  doc["precision"] = ratio_json(m.precision);
  doc["recall"] = ratio_json(m.recall);
  doc["f1"] = ratio_json(m.f1);
  doc["true_positive"] = m.true_positive;
  doc["false_positive"] = m.false_positive;
  doc["false_negative"] = m.false_negative;
  doc["total"] = m.total;
  return doc;
}

}  // namespace

nlohmann::ordered_json evaluate_run(const EvaluateInputs& inputs) {
  nlohmann::ordered_json report;

  std::optional<claims::ObjectLexicon> lexicon;
  if (inputs.lexicon) lexicon = claims::ObjectLexicon::from_file(*inputs.lexicon);

  std::map<std::string, AnnotatedImage> annotations;
  if (inputs.annotations) annotations = read_annotations(*inputs.annotations);

  if (inputs.generations) {
    if (!inputs.annotations) throw ConfigError("generative metrics require annotations");
    std::vector<metrics::GenerationRecord> records;
    util::for_each_jsonl(*inputs.generations, [&](std::size_t line_no, const nlohmann::json& obj) {
      try {
        metrics::GenerationRecord record;
        record.image_id = obj.at("image_id").get<std::string>();
        if (obj.contains("mentioned_objects")) {
          for (const auto& object : obj.at("mentioned_objects")) {
            record.mentioned_objects.push_back(object.get<std::string>());
          }
        } else if (obj.contains("caption")) {
          if (!lexicon) {
            throw Error("captions need a lexicon for object extraction (--lexicon)");
          }
          record.mentioned_objects =
              claims::extract_object_claims(obj.at("caption").get<std::string>(), *lexicon);
        } else {
          throw Error("expected \"mentioned_objects\" or \"caption\"");
        }
        records.push_back(std::move(record));
      } catch (const nlohmann::json::exception& ex) {
        throw Error(inputs.generations->string() + ":" + std::to_string(line_no) + ": " +
                    ex.what());
      } catch (const Error& ex) {
        throw Error(inputs.generations->string() + ":" + std::to_string(line_no) + ": " +
                    ex.what());
      }
    });
    const auto gen = metrics::generative_metrics(records, annotations, inputs.chair_aggregation);
    nlohmann::ordered_json doc;
    doc["records"] = records.size();
    doc["chair"] = ratio_json(gen.chair);
    doc["cover"] = ratio_json(gen.cover);
    doc["hal"] = ratio_json(gen.hal);
    doc["cog"] = ratio_json(gen.cog);
    doc["cog_defined"] = gen.cog_defined;
    report["generative"] = std::move(doc);
  }

  if (inputs.objhal) {
    std::vector<metrics::ObjHalRecord> records;
    util::for_each_jsonl(*inputs.objhal, [&](std::size_t line_no, const nlohmann::json& obj) {
      try {
        metrics::ObjHalRecord record;
        if (obj.contains("caption")) {
          if (!lexicon) throw Error("captions need a lexicon (--lexicon)");
          const auto it = annotations.find(obj.at("image_id").get<std::string>());
          if (it == annotations.end()) throw Error("no annotation for image_id");
          record = metrics::objhal_record_from_caption(obj.at("caption").get<std::string>(),
                                                       *lexicon, it->second.gt_objects);
        } else {
          record.n_hallucinated_mentions = obj.at("n_hallucinated").get<int>();
          record.n_total_mentions = obj.at("n_total").get<int>();
          record.has_hallucinated_sentence = obj.at("has_hallucinated_sentence").get<bool>();
        }
        records.push_back(record);
      } catch (const nlohmann::json::exception& ex) {
        throw Error(inputs.objhal->string() + ":" + std::to_string(line_no) + ": " + ex.what());
      } catch (const Error& ex) {
        throw Error(inputs.objhal->string() + ":" + std::to_string(line_no) + ": " + ex.what());
      }
    });
    const auto rates = metrics::objhal_rates(records);
    nlohmann::ordered_json doc;
    doc["records"] = records.size();
    doc["resp_rate"] = ratio_json(rates.resp_rate);
    doc["ment_rate"] = ratio_json(rates.ment_rate);
    doc["ment_defined"] = rates.ment_defined;
    report["objhal"] = std::move(doc);
  }

  if (inputs.discriminative) {
    std::vector<metrics::DiscriminativeRecord> records;
    util::for_each_jsonl(*inputs.discriminative,
                         [&](std::size_t line_no, const nlohmann::json& obj) {
      try {
        metrics::DiscriminativeRecord record;
        record.question_id = obj.at("question_id").get<std::string>();
        record.gt_answer =
            gateway::binary_answer_from_string(obj.at("gt_answer").get<std::string>());
        if (obj.contains("pred")) {
          record.pred = gateway::binary_answer_from_string(obj.at("pred").get<std::string>());
        } else if (obj.contains("raw_pred")) {
          record.pred = gateway::parse_binary(obj.at("raw_pred").get<std::string>());
        } else {
          throw Error("expected \"pred\" or \"raw_pred\"");
        }
        record.category =
            claims::claim_category_from_string(obj.at("category").get<std::string>());
        records.push_back(std::move(record));
      } catch (const nlohmann::json::exception& ex) {
        throw Error(inputs.discriminative->string() + ":" + std::to_string(line_no) + ": " +
                    ex.what());
      } catch (const Error& ex) {
        throw Error(inputs.discriminative->string() + ":" + std::to_string(line_no) + ": " +
                    ex.what());
      }
    });
    const auto disc = metrics::discriminative_metrics(records);
    nlohmann::ordered_json doc;
    doc["records"] = records.size();
    doc["overall"] = prf_json(disc.overall);
    nlohmann::ordered_json per_category = nlohmann::ordered_json::object();
    for (const auto& [category, m] : disc.per_category) {
      per_category[claims::to_string(category)] = prf_json(m);
    }
    doc["per_category"] = std::move(per_category);
    report["discriminative"] = std::move(doc);
  }

  return report;
}

std::string render_report_table(const nlohmann::ordered_json& report) {
  std::ostringstream out;
  auto row = [&](const std::string& name, const nlohmann::ordered_json& cell) {
    out << "  " << name;
    for (std::size_t i = name.size(); i < 12; ++i) out << ' ';
    out << cell.at("value").get<double>() << "  (" << cell.at("exact").get<std::string>() << ")\n";
  };
  if (report.contains("generative")) {
    const auto& gen = report.at("generative");
    out << "generative (" << gen.at("records").get<std::size_t>() << " responses)\n";
    row("chair", gen.at("chair"));
    row("cover", gen.at("cover"));
    row("hal", gen.at("hal"));
    row("cog", gen.at("cog"));
  }
  if (report.contains("objhal")) {
    const auto& oh = report.at("objhal");
    out << "objhal (" << oh.at("records").get<std::size_t>() << " responses)\n";
    row("resp_rate", oh.at("resp_rate"));
    row("ment_rate", oh.at("ment_rate"));
  }
  if (report.contains("discriminative")) {
    const auto& disc = report.at("discriminative");
    out << "discriminative (" << disc.at("records").get<std::size_t>() << " questions)\n";
    row("accuracy", disc.at("overall").at("accuracy"));
    row("precision", disc.at("overall").at("precision"));
    row("recall", disc.at("overall").at("recall"));
    row("f1", disc.at("overall").at("f1"));
    for (const auto& [category, m] : disc.at("per_category").items()) {
      row(category + "/f1", m.at("f1"));
    }
  }
  return out.str();
}

}  // namespace halprobe::runstore

#pragma once

#include <map>
#include <string>

#include "speechpanel/pipeline.hpp"
#include "speechpanel/synth.hpp"

namespace testing {

// In-memory inputs for the pipeline built from a generated corpus.
struct SynthInputs {
  speechpanel::SynthCorpus corpus;
  speechpanel::FrequencyTable freq;
  std::map<std::string, speechpanel::TreeSet> trees;

  explicit SynthInputs(speechpanel::SynthCorpus c)
      : corpus(std::move(c)), freq({corpus.frequencies.begin(), corpus.frequencies.end()}) {
    for (const auto& [id, lines] : corpus.trees) {
      std::string text;
      for (const auto& l : lines) text += l + "\n";
      trees[id] = speechpanel::parse_tree_sidecar(text, id);
    }
  }

  speechpanel::EncodingContext context() const {
    speechpanel::EncodingContext ctx;
    ctx.store = &corpus.embeddings;
    ctx.freq = &freq;
    ctx.ext = &corpus.ext;
    return ctx;
  }
};

}  // namespace testing

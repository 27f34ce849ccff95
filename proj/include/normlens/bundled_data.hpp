#pragma once

#include <string_view>

// Contents of the files under data/, compiled into the library.
namespace normlens::bundled {

extern const std::string_view venue_map;
extern const std::string_view abbreviations;
extern const std::string_view artifact_lexicon;
extern const std::string_view value_lexicon;
extern const std::string_view quant_evidence_prompt;
extern const std::string_view adaptation_prompt;
extern const std::string_view mini_corpus;

}  // namespace normlens::bundled

#pragma once

#include <string_view>

#include "dramatis/corpus.hpp"

namespace dramatis {

// Parses a TEI drama document into a PlayDocument: cast list from
// particDesc (characters with no speech retained), one utterance per <sp>,
// stage directions / speaker labels / editorial notes excluded from speech.
// Speaker references without a declared character are synthesized with
// gender unknown and reported. Throws XmlParseError on ill-formed XML.
PlayDocument parse_tei(std::string_view xml_text, std::string_view fallback_play_id = "",
                       IngestionReport* report = nullptr, std::string_view corpus_id = "");

}  // namespace dramatis

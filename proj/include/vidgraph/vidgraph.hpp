#pragma once

// Umbrella header. http.hpp is left out so that library users do not pull in
// cpp-httplib unless they serve.

#include "vidgraph/classification.hpp"
#include "vidgraph/corpus.hpp"
#include "vidgraph/correlation_xml.hpp"
#include "vidgraph/error.hpp"
#include "vidgraph/explore.hpp"
#include "vidgraph/graph.hpp"
#include "vidgraph/ingest.hpp"
#include "vidgraph/pipeline.hpp"
#include "vidgraph/profile.hpp"
#include "vidgraph/semantics.hpp"
#include "vidgraph/service.hpp"
#include "vidgraph/store.hpp"

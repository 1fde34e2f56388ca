/*
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#pragma once

// Runtime core: values, data structures, catalog, project files, interpreter.
// The CLI (cli.hpp) and HTTP binding (service_http.hpp) are included
// separately because they pull in CLI11 and cpp-httplib.

#include "blockdsa/catalog.hpp"
#include "blockdsa/diagnostic.hpp"
#include "blockdsa/ds.hpp"
#include "blockdsa/interpreter.hpp"
#include "blockdsa/ordered_map.hpp"
#include "blockdsa/project.hpp"
#include "blockdsa/registry.hpp"
#include "blockdsa/result.hpp"
#include "blockdsa/sort.hpp"
#include "blockdsa/value.hpp"

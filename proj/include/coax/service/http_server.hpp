/*
 * Copyright 2026 The CoAX Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef COAX_SERVICE_HTTP_SERVER_HPP_
#define COAX_SERVICE_HTTP_SERVER_HPP_

#include "coax/service/study_service.hpp"

namespace httplib {
class Server;
}

namespace coax::service {

// Routes:
//   POST /api/sessions                      create, body {"participant_id"?}
//   GET  /api/sessions/{token}/trial        current payload
//   POST /api/sessions/{token}/decision     body {"trial_index", "label" | "choice"}
//   GET  /api/export                        X-Admin-Token; ?excluded=1&incomplete=1
//   GET  /api/health
// plus the static UI directory at "/" when configured.
void RegisterRoutes(httplib::Server& server, StudyService& service);

// Blocks until the server stops.
void Serve(StudyService& service);

}  // namespace coax::service

#endif  // COAX_SERVICE_HTTP_SERVER_HPP_

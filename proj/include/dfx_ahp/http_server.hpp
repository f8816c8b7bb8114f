#pragma once

#include "dfx_ahp/service.hpp"

#include <httplib.h>

#include <map>
#include <string>

namespace dfx_ahp {

/// Routes every request of `server` through `api`.
inline void bind_routes(httplib::Server& server, ServiceApi& api) {
    auto handler = [&api](const httplib::Request& req, httplib::Response& res) {
        std::multimap<std::string, std::string> query(req.params.begin(), req.params.end());
        const auto out = api.dispatch(req.method, req.path, query, req.body);
        res.status = out.status;
        res.set_header("Access-Control-Allow-Origin", "*");
        res.set_content(out.body.dump(), "application/json");
    };
    const std::string any = R"(/.*)";
    server.Get(any, handler);
    server.Post(any, handler);
    server.Put(any, handler);
    server.Options(any, [](const httplib::Request&, httplib::Response& res) {
        res.set_header("Access-Control-Allow-Origin", "*");
        res.set_header("Access-Control-Allow-Methods", "GET, POST, PUT, OPTIONS");
        res.set_header("Access-Control-Allow-Headers", "Content-Type");
        res.status = 204;
    });
}

}  // namespace dfx_ahp

"""
Test FastAPI is correctly generating the routes
"""

from tscycles.main import app


# Check routes
routes = [(r.path, r.methods) for r in app.routes]

assert ("/", {"GET"}) in routes
assert ("/v1/", {"GET"}) in routes

assert ("/v1/series", {"GET"}) in routes
for endpoint in ["", "/describe", "/acf"]:
    assert ("/v1/series/{name}" + endpoint, {"GET"}) in routes

for endpoint in ["tests", "unitroot", "longmemory", "breaks"]:
    assert ("/v1/characteristics/{name}/" + endpoint, {"GET"}) in routes

assert ("/v1/periodicity/cycles", {"GET"}) in routes
for endpoint in ["decompose", "spectrum", "frequency", "peaks"]:
    assert ("/v1/periodicity/{name}/" + endpoint, {"GET"}) in routes

assert ("/v1/report", {"POST"}) in routes
assert ("/v1/report/parameters", {"GET"}) in routes
assert ("/v1/report/schema", {"GET"}) in routes

print("Checks for API routes passed!")

from fastapi.testclient import TestClient

from main import app

client = TestClient(app)


def test_root():
    response = client.get("/")
    assert response.status_code == 200
    assert response.json()["docs"] == "/docs"


def test_health():
    response = client.get("/health")
    assert response.status_code == 200
    assert response.json() == {"status": "healthy"}


def test_classify_example():
    response = client.post("/maps/classify", json={"example": "canonoid-x3sq"})
    assert response.status_code == 200
    data = response.json()
    assert data["kind"] == "not_universal"
    assert data["bracket_expr"] == "2*x3"


def test_classify_inline_map():
    response = client.post(
        "/maps/classify",
        json={"map": {"X1": "2*x1", "X2": "x2", "X3": "x3"}, "coefficients": True},
    )
    assert response.status_code == 200
    data = response.json()
    assert data["kind"] == "canonoid_universal"
    assert data["constant_value"] == 2.0
    assert len(data["coefficients"]) == 3


def test_direct_conditions():
    response = client.post("/maps/direct-conditions", json={"example": "point1"})
    assert response.status_code == 200
    assert response.json()["pass"] is True


def test_transport():
    response = client.post("/maps/transport", json={"example": "euler-nahm"})
    assert response.status_code == 200
    data = response.json()
    assert data["coords"] == "X"
    assert "X1" in data["H1"]


def test_verify_k():
    response = client.post("/maps/verify-k", json={"example": "takhtajan-rotation"})
    assert response.status_code == 200
    assert response.json()["pass"] is True


def test_verify_k_wrong_pair():
    response = client.post(
        "/maps/verify-k",
        json={"example": "takhtajan-rotation",
              "kpair": {"H1": "(X1^2 + X2^2 + X3^2)/2", "H2": "2*sqrt(3)*X3", "coords": "X"}},
    )
    assert response.status_code == 200
    assert response.json()["pass"] is False


def test_genfun_verify():
    response = client.post("/genfun/verify", json={"example": "rotation-x1-timedep"})
    assert response.status_code == 200
    labels = [c["label"] for c in response.json()["identities"]]
    assert response.json()["pass"] is True
    assert any(label.startswith("time_part") for label in labels)


def test_genfun_verify_without_functions():
    response = client.post("/genfun/verify", json={"example": "SC"})
    assert response.status_code == 400


def test_genfun_abc():
    response = client.post("/genfun/abc", json={"example": "gauge1"})
    assert response.status_code == 200
    data = response.json()
    assert data["A"] == "0"
    assert data["divergence"]["pass"] is True


def test_lie_series():
    response = client.post("/lie/series", json={"G1": "(x2^2 + x3^2)/2", "G2": "x1", "eps": 0.5, "order": 20,
                                                "check_rotation": True})
    assert response.status_code == 200
    data = response.json()
    assert data["field"] == ["0", "x3", "-x2"]
    assert data["X"][0] == "x1"
    assert data["rotation"]["pass"] is True


def test_lie_cross_check():
    response = client.post("/lie/cross-check", json={"example": "ict-rotation", "eps": 0.3, "order": 15})
    assert response.status_code == 200
    assert response.json()["pass"] is True


def test_compose_example():
    response = client.post("/sequences/compose", json={"example": "SL"})
    assert response.status_code == 200
    data = response.json()
    assert len(data["steps"]) == 4
    assert data["report"]["pass"] is True


def test_compose_inline_steps():
    response = client.post("/sequences/compose", json={
        "steps": [{"kind": "gauge1", "f1": "x1^2", "f2": "sin(x1)"}],
        "target": {"X1": "x1", "X2": "x2 + x1^2", "X3": "x3 + sin(x1)"},
    })
    assert response.status_code == 200
    assert response.json()["report"]["pass"] is True


def test_evolve():
    response = client.post("/dynamics/evolve", json={"example": "euler-nahm", "t_end": 0.5, "h": 0.01})
    assert response.status_code == 200
    data = response.json()
    assert abs(data["samples"][-1]["t"] - 0.5) < 1e-12
    assert data["aborted"] is False


def test_evolve_inline():
    response = client.post("/dynamics/evolve", json={
        "pair": {"H1": "(x1^2 + x2^2 + x3^2)/2", "H2": "x1 + x2 + x3"},
        "x0": {"x1": 1.0, "x2": 0.0, "x3": 0.0},
        "t_end": 0.1,
        "h": 0.01,
    })
    assert response.status_code == 200
    assert len(response.json()["samples"]) == 11


def test_list_examples():
    response = client.get("/examples/")
    assert response.status_code == 200
    assert len(response.json()) == 15
    lie_only = client.get("/examples/", params={"tag": "lie"})
    assert [e["id"] for e in lie_only.json()] == ["ict-rotation"]


def test_get_example():
    response = client.get("/examples/takhtajan-rotation")
    assert response.status_code == 200
    assert response.json()["expected"] == "canonical"


def test_unknown_example():
    assert client.get("/examples/nope").status_code == 404
    assert client.post("/maps/classify", json={"example": "nope"}).status_code == 404


def test_selftest_endpoint():
    response = client.post("/examples/selftest", json={"module": "lie"})
    assert response.status_code == 200
    assert response.json()["pass"] is True
    assert client.post("/examples/selftest", json={"module": "optics"}).status_code == 400


def test_missing_map():
    response = client.post("/maps/classify", json={})
    assert response.status_code == 422


def test_bad_expression():
    response = client.post("/maps/classify", json={"map": {"X1": "x1 +", "X2": "x2", "X3": "x3"}})
    assert response.status_code == 400
    assert response.json()["error"] == "ExprSyntaxError"


def test_genfun_verify_swapped_pair_against_negated_form():
    gf = {"F1": "-x1^2 - x2^2/4 + x3^2/2 - x1*x2 - x1*x3", "F2": "-2*x3 - x2"}
    swapped = client.post("/genfun/verify", json={"example": "linear", "gf": gf})
    assert swapped.json()["pass"] is False
    negated = client.post("/genfun/verify", json={"example": "linear", "gf": gf, "negated": True})
    assert negated.status_code == 200
    assert negated.json()["pass"] is True

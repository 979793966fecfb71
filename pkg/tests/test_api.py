"""
Unit tests for the HTTP API
"""
from khow import storage
from khow.fixtures import emp_fail_lts


def test_health(client):
    response = client.get('/health')
    assert response.status_code == 200
    assert response.json() == {'status': 'ok', 'env': 'testing', 'version': '1.0.0'}


class TestLogicRoutes:
    """POST /check, /sat, /valid"""

    def test_check(self, client, emp_fail_doc):
        response = client.post('/check', json={'model': emp_fail_doc, 'state': 'w', 'formula': 'Kh[1](p, q)'})
        assert response.status_code == 200
        body = response.json()
        assert body['verdict'] is True
        assert body['witnesses'] == [[['a']]]

    def test_check_lts(self, client):
        doc = storage.document_dict(emp_fail_lts())
        response = client.post('/check', json={'model': doc, 'state': 'w', 'formula': 'Kh[7](p, r)'})
        assert response.status_code == 200
        assert response.json()['witnesses'] == [[['a', 'b']]]

    def test_unknown_state(self, client, emp_fail_doc):
        response = client.post('/check', json={'model': emp_fail_doc, 'state': 'z', 'formula': 'p'})
        assert response.status_code == 404
        assert response.json() == {'detail': 'Unknown state: z'}
        assert response.headers['X-Khow-Error'] == 'UnknownStateError'

    def test_syntax_error(self, client, emp_fail_doc):
        response = client.post('/check', json={'model': emp_fail_doc, 'state': 'w', 'formula': 'p &'})
        assert response.status_code == 422
        assert 'byte offset' in response.json()['detail']
        assert response.headers['X-Khow-Error'] == 'FormulaSyntaxError'

    def test_unknown_agent(self, client, emp_fail_doc):
        response = client.post('/check', json={'model': emp_fail_doc, 'state': 'w', 'formula': 'Kh[2](p, q)'})
        assert response.status_code == 422
        assert response.json() == {'detail': 'Unknown agent: 2'}
        assert response.headers['X-Khow-Error'] == 'UnknownAgentError'

    def test_sat(self, client):
        response = client.post('/sat', json={'formula': 'Kh[1](p, q) & Kh[1](q, r) & ~Kh[1](p, r)'})
        assert response.status_code == 200
        body = response.json()
        assert body['satisfiable'] is True
        assert body['model']['point'] == body['point']

    def test_unsat(self, client):
        response = client.post('/sat', json={'formula': 'p & ~p'})
        assert response.json() == {'satisfiable': False, 'bound': 11}

    def test_valid(self, client):
        response = client.post('/valid', json={'formula': 'Kh[1](false, p)'})
        assert response.json()['valid'] is True

    def test_empty_agents(self, client):
        response = client.post('/valid', json={'formula': 'p', 'agents': []})
        assert response.status_code == 422


class TestEquivalenceRoutes:
    """POST /bisim, /equiv"""

    def test_bisim(self, client, emp_fail_doc):
        body = {'left': emp_fail_doc, 'left_state': 'w', 'right': emp_fail_doc, 'right_state': 'w'}
        response = client.post('/bisim', json=body)
        assert response.status_code == 200
        assert response.json()['bisimilar'] is True
        assert ['w', 'w'] in response.json()['relation']

    def test_equiv_fact(self, client, emp_fail_doc):
        body = {'left': emp_fail_doc, 'left_state': 'w', 'right': emp_fail_doc, 'right_state': 'u'}
        response = client.post('/equiv', json=body)
        assert response.json()['equivalent'] is False
        assert response.json()['fact']['clause'] == 'Atom'


class TestTransformRoutes:
    """POST /filter, /translate, /classify"""

    def test_filter(self, client, emp_fail_doc):
        response = client.post('/filter', json={'model': emp_fail_doc, 'formula': 'Kh[1](p, q)'})
        assert response.status_code == 200
        body = response.json()
        assert len(body['states']) == 3
        assert body['class_map']['v_r'] == '[v_r,x]'

    def test_translate_precondition(self, client, emp_fail_doc):
        response = client.post('/translate', json={'model': emp_fail_doc, 'to': 'lts'})
        assert response.status_code == 409
        assert 'is_active' in response.json()['detail']

    def test_translate_ac(self, client):
        doc = storage.document_dict(emp_fail_lts())
        response = client.post('/translate', json={'model': doc, 'to': 'ults-ac'})
        assert response.status_code == 200
        assert len(response.json()['actions']) == 5

    def test_classify(self, client, emp_fail_doc):
        response = client.post('/classify', json={'model': emp_fail_doc})
        body = response.json()
        assert body['is_active'] is False
        assert body['counterexample'] == [[['a']], [['b']]]


class TestModelValidation:
    """Invalid model documents"""

    def test_overlapping_plan_sets(self, client, emp_fail_doc):
        emp_fail_doc['plansets']['1'].append([['a']])
        response = client.post('/classify', json={'model': emp_fail_doc})
        assert response.status_code == 422
        assert 'clause (ii)' in response.json()['detail']

    def test_empty_plan_set(self, client, emp_fail_doc):
        emp_fail_doc['plansets']['1'].append([])
        response = client.post('/classify', json={'model': emp_fail_doc})
        assert response.status_code == 422
        assert response.json()['detail'].startswith('empty plan set for agent 1')

    def test_unknown_action(self, client, emp_fail_doc):
        emp_fail_doc['plansets']['1'].append([['z']])
        response = client.post('/classify', json={'model': emp_fail_doc})
        assert response.status_code == 422


class TestHarnessRoute:
    """POST /axioms"""

    def test_run(self, client):
        response = client.post('/axioms', json={'schemas': ['TA', 'EMP'], 'trials': 5, 'seed': 4})
        assert response.status_code == 200
        results = {r['schema_name']: r['counterexamples'] for r in response.json()['results']}
        assert results['TA'] == 0
        assert results['EMP'] >= 1

    def test_limits(self, client):
        response = client.post('/axioms', json={'trials': 0})
        assert response.status_code == 422

# Exception tests

"""Router tests package.""" 
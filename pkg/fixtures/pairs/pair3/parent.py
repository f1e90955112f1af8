import rospy
import smach

from robot_skills.navigation import NavigateToArea
from robot_skills.detection import LookForPerson
from robot_skills.speech import Say


class FindPerson(smach.StateMachine):
    """Navigate to the predefined area and search for a person."""

    def __init__(self, robot, area, found_person_designator):
        smach.StateMachine.__init__(self, outcomes=['succeeded', 'failed'])
        self.robot = robot
        with self:
            smach.StateMachine.add('SAY_START',
                                   Say(robot, 'I am going to look for a person.'),
                                   transitions={'spoken': 'NAVIGATE_TO_AREA'})

            smach.StateMachine.add('NAVIGATE_TO_AREA',
                                   NavigateToArea(robot, area),
                                   transitions={'arrived': 'LOOK_FOR_PERSON',
                                                'unreachable': 'SAY_FAILED',
                                                'blocked': 'NAVIGATE_TO_AREA'})

            smach.StateMachine.add('LOOK_FOR_PERSON',
                                   LookForPerson(robot, found_person_designator),
                                   transitions={'found': 'SAY_FOUND',
                                                'not_found': 'SAY_FAILED'})

            smach.StateMachine.add('SAY_FOUND',
                                   Say(robot, 'I found you.'),
                                   transitions={'spoken': 'succeeded'})

            smach.StateMachine.add('SAY_FAILED',
                                   Say(robot, 'I could not find anyone.'),
                                   transitions={'spoken': 'failed'})


if __name__ == '__main__':
    rospy.init_node('find_person')
    sm = FindPerson(None, 'living_room', None)
    sm.execute()
